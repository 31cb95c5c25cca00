/*
 * Copyright 2026 The ttshap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ttshap/shap_engine.h"

#include <bit>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "ttshap/coalition_weights.h"
#include "ttshap/errors.h"
#include "ttshap/parallel.h"

namespace ttshap {
namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_pair(const TensorTrain& model, const TensorTrain& dist,
                std::span<const std::size_t> x) {
  if (model.length() == 0) throw ShapeError("model train is empty");
  if (model.length() != dist.length()) {
    throw ShapeError("model has " + std::to_string(model.length()) +
                     " sites, distribution has " + std::to_string(dist.length()));
  }
  if (model.left_boundary() != 1) {
    throw ShapeError("model left boundary must be 1, got " +
                     std::to_string(model.left_boundary()));
  }
  if (dist.left_boundary() != 1 || dist.right_boundary() != 1) {
    throw ShapeError("distribution train must have unit boundaries");
  }
  for (std::size_t t = 0; t < model.length(); ++t) {
    if (model.physical_dim(t) != dist.physical_dim(t)) {
      throw ShapeError("site " + std::to_string(t + 1) + ": model dimension " +
                       std::to_string(model.physical_dim(t)) + " vs distribution dimension " +
                       std::to_string(dist.physical_dim(t)));
    }
  }
  check_instance(x, model.physical_dims());
}

void add_into(DenseTensor& acc, const DenseTensor& term) {
  auto a = acc.mutable_values();
  auto b = term.values();
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
}

DenseTensor slice_sum(const TensorTrain& tt, std::size_t site) {
  const std::vector<double> ones(tt.physical_dim(site), 1.0);
  return tt.weighted_slice_sum(site, ones);
}

// sum_s P_t[s] (x) M_t[s]: the site transfer when the feature is resampled.
DenseTensor resampled_transfer(const TensorTrain& model, const TensorTrain& dist,
                               std::size_t site) {
  DenseTensor acc;
  for (std::size_t s = 1; s <= model.physical_dim(site); ++s) {
    DenseTensor term = kron(dist.slice(site, s), model.slice(site, s));
    if (s == 1) {
      acc = std::move(term);
    } else {
      add_into(acc, term);
    }
  }
  return acc;
}

std::size_t ceil_log2(std::size_t k) {
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < k) ++levels;
  return levels;
}

}  // namespace

double distribution_mass(const TensorTrain& dist) {
  if (dist.length() == 0) throw ShapeError("distribution train is empty");
  std::vector<DenseTensor> sums;
  sums.reserve(dist.length());
  for (std::size_t t = 0; t < dist.length(); ++t) sums.push_back(slice_sum(dist, t));
  const DenseTensor total = scan_product(sums, ScanSchedule::kSequential);
  if (total.size() != 1) throw ShapeError("distribution train must have unit boundaries");
  return total.values()[0];
}

std::vector<SiteCore> assemble_site_cores(const TensorTrain& model, const TensorTrain& dist,
                                          std::span<const std::size_t> x,
                                          std::size_t threads) {
  check_pair(model, dist, x);
  const std::size_t n = model.length();
  const TensorTrain weights = weight_cores(n).train;
  std::vector<SiteCore> out(n);
  parallel_for(n, threads, [&](std::size_t t) {
    const std::size_t dim = model.physical_dim(t);
    const DenseTensor routed =
        contract(one_hot(x[t], dim), router_tensor(dim).tensor, {{1, 1}});
    const DenseTensor with_model = contract(routed, model.core(t), {{3, 2}});
    const DenseTensor with_dist = contract(with_model, dist.core(t), {{2, 2}});
    const DenseTensor full = contract(with_dist, weights.core(t), {{1, 2}});
    const std::size_t perm[] = {5, 3, 1, 6, 4, 2};
    out[t] = {reshape(permute(full, perm), {3, 3}), t};
  });
  return out;
}

ShapMatrix shap_tt(const TensorTrain& model, const TensorTrain& dist,
                   std::span<const std::size_t> x, ScanSchedule schedule,
                   std::size_t threads, ScanStats* stats) {
  check_pair(model, dist, x);
  const double mass = distribution_mass(dist);
  if (!(std::abs(mass - 1.0) <= kMassTolerance)) {
    throw ValidationError("distribution mass is " + format_value(mass) + ", expected 1");
  }
  const std::size_t n = model.length();
  const std::size_t outputs = model.right_boundary();
  threads = std::max<std::size_t>(1, threads);

  std::vector<DenseTensor> resampled(n), kept(n);
  parallel_for(n, threads, [&](std::size_t t) {
    resampled[t] = resampled_transfer(model, dist, t);
    kept[t] = kron(slice_sum(dist, t), model.slice(t, x[t]));
  });

  DenseTensor phi({n, outputs});
  std::vector<std::size_t> products(n, 0);
  const std::size_t inner_threads = std::max<std::size_t>(1, threads / n);
  parallel_for(n, threads, [&](std::size_t i) {
    const TensorTrain block = weight_cores_for_feature(n, i + 1);
    std::vector<DenseTensor> chain(n);
    for (std::size_t t = 0; t < n; ++t) {
      chain[t] = kron(block.slice(t, kDropped), resampled[t]);
      add_into(chain[t], kron(block.slice(t, kKept), kept[t]));
    }
    ScanStats local;
    const DenseTensor row =
        n == 1 ? chain[0] : scan_product(chain, schedule, inner_threads, &local);
    products[i] = local.products;
    auto dst = phi.mutable_values().subspan(i * outputs, outputs);
    for (std::size_t o = 0; o < outputs; ++o) dst[o] = row.values()[o];
  });

  if (stats != nullptr) {
    stats->levels = schedule == ScanSchedule::kTree ? ceil_log2(n) : 0;
    stats->products = 0;
    for (std::size_t p : products) stats->products += p;
  }
  return {std::move(phi), {}, {}};
}

ShapMatrix shap_dense_oracle(const ModelEvaluator& model, const EnumerableDistribution& dist,
                             std::span<const std::size_t> x, std::size_t cap) {
  check_instance(x, dist.dims);
  const std::size_t n = x.size();
  if (n > kOracleMaxFeatures) {
    throw ResourceError("oracle limited to " + std::to_string(kOracleMaxFeatures) +
                        " features, got " + std::to_string(n));
  }
  const std::size_t domain = domain_size(dist.dims);
  if (domain > cap) {
    throw ResourceError("oracle domain has " + std::to_string(domain) +
                        " points, cap is " + std::to_string(cap));
  }

  // Tabulate the model once; coalition values then reduce to table lookups.
  std::vector<double> table;
  std::size_t outputs = 0;
  {
    Instance y(n, 1);
    std::size_t k = 0;
    do {
      const std::vector<double> f = model(y);
      if (k == 0) {
        outputs = f.size();
        table.assign(domain * outputs, 0.0);
      } else if (f.size() != outputs) {
        throw ShapeError("model output length changes across the domain");
      }
      for (std::size_t o = 0; o < outputs; ++o) table[k * outputs + o] = f[o];
      ++k;
    } while (next_point(y, dist.dims));
  }
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t t = n; t-- > 1;) stride[t - 1] = stride[t] * dist.dims[t];

  const std::size_t coalitions = std::size_t{1} << n;
  std::vector<double> value(coalitions * outputs, 0.0);
  for (std::size_t mask = 0; mask < coalitions; ++mask) {
    double* v = &value[mask * outputs];
    for (std::size_t p = 0; p < dist.points.size(); ++p) {
      const Instance& sample = dist.points[p];
      std::size_t index = 0;
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t sym = (mask >> t) & 1 ? x[t] : sample[t];
        index += (sym - 1) * stride[t];
      }
      for (std::size_t o = 0; o < outputs; ++o) {
        v[o] += dist.probabilities[p] * table[index * outputs + o];
      }
    }
  }

  DenseTensor phi({n, outputs});
  auto out = phi.mutable_values();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t mask = 0; mask < coalitions; ++mask) {
      if (mask & bit) continue;
      const double w = shapley_weight(static_cast<std::size_t>(std::popcount(mask)), n);
      for (std::size_t o = 0; o < outputs; ++o) {
        out[i * outputs + o] +=
            w * (value[(mask | bit) * outputs + o] - value[mask * outputs + o]);
      }
    }
  }
  return {std::move(phi), {}, {}};
}

DenseTensor marginal_value_tensor(const DenseTensor& model, const DenseTensor& dist) {
  const std::size_t n = dist.order();
  if (n == 0 || model.order() != n + 1) {
    throw ShapeError("model needs one axis per distribution axis plus an output axis");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (model.shape()[t] != dist.shape()[t]) {
      throw ShapeError("axis " + std::to_string(t + 1) + ": model dimension " +
                       std::to_string(model.shape()[t]) + " vs distribution dimension " +
                       std::to_string(dist.shape()[t]));
    }
  }
  if (domain_size(dist.shape()) > kGeneralDomainCap) {
    throw ResourceError("dense path limited to " + std::to_string(kGeneralDomainCap) +
                        " domain points");
  }
  std::size_t routed_size = model.shape()[n];
  for (std::size_t t = 0; t < n; ++t) {
    routed_size *= 2 * dist.shape()[t] * dist.shape()[t];
    if (routed_size > (std::size_t{1} << 26)) {
      throw ResourceError("routed model tensor too large for the dense path");
    }
  }

  DenseTensor acc = model;
  for (std::size_t t = 0; t < n; ++t) {
    acc = contract(acc, router_tensor(dist.shape()[t]).tensor, {{1, 4}});
  }
  // acc axes: (out, x_1, s_1, p_1, ..., x_n, s_n, p_n).
  std::vector<AxisPair> pairs;
  for (std::size_t t = 1; t <= n; ++t) pairs.emplace_back(3 * t + 1, t);
  return contract(acc, dist, pairs);
}

ShapMatrix shap_general_dense(const DenseTensor& model, const DenseTensor& dist,
                              std::span<const std::size_t> x) {
  const DenseTensor value = marginal_value_tensor(model, dist);
  const std::size_t n = dist.order();
  check_instance(x, dist.shape());
  const DenseTensor weights = weight_tensor_dense(n);
  std::vector<AxisPair> pairs;
  for (std::size_t t = 1; t <= n; ++t) pairs.emplace_back(2 * t + 1, t + 1);
  // Axes (out, x_1, ..., x_n, feature).
  const DenseTensor full = contract(value, weights, pairs);
  const std::size_t outputs = model.shape()[n];
  DenseTensor phi({n, outputs});
  std::vector<std::size_t> index(n + 2);
  for (std::size_t t = 0; t < n; ++t) index[t + 1] = x[t] - 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < outputs; ++o) {
      index[0] = o;
      index[n + 1] = i;
      phi.at({i, o}) = full.at(index);
    }
  }
  return {std::move(phi), {}, {}};
}

std::vector<double> expected_value(const TensorTrain& model, const TensorTrain& dist) {
  if (model.length() == 0 || model.length() != dist.length()) {
    throw ShapeError("model and distribution lengths differ");
  }
  std::vector<DenseTensor> transfers;
  transfers.reserve(model.length());
  for (std::size_t t = 0; t < model.length(); ++t) {
    if (model.physical_dim(t) != dist.physical_dim(t)) {
      throw ShapeError("site " + std::to_string(t + 1) + ": physical dimensions differ");
    }
    transfers.push_back(resampled_transfer(model, dist, t));
  }
  const DenseTensor e = scan_product(transfers, ScanSchedule::kSequential);
  if (e.shape()[0] != 1) throw ShapeError("expected value needs unit left boundaries");
  return {e.values().begin(), e.values().end()};
}

double efficiency_residual(const ShapMatrix& phi, const TensorTrain& model,
                           const TensorTrain& dist, std::span<const std::size_t> x) {
  const DenseTensor fx = tt_eval(model, x);
  const std::vector<double> ev = expected_value(model, dist);
  double worst = 0.0;
  for (std::size_t o = 0; o < phi.outputs(); ++o) {
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.features(); ++i) sum += phi.at(i, o);
    worst = std::max(worst, std::abs(sum - (fx.values()[o] - ev[o])));
  }
  return worst;
}

}  // namespace ttshap
