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

#include "ttshap/distributions.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ttshap/errors.h"
#include "ttshap/shap_engine.h"

namespace ttshap {
namespace {

void check_probability_vector(const std::vector<double>& p, const std::string& what) {
  if (p.empty()) throw ValidationError(what + " is empty");
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError(what + " has an invalid entry " + std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw ValidationError(what + " sums to " + std::to_string(sum));
  }
}

}  // namespace

TensorTrain uniform_to_tt(const std::vector<std::size_t>& dims) {
  std::vector<std::vector<double>> marginals;
  for (std::size_t d : dims) {
    if (d == 0) throw ValidationError("uniform dimension must be positive");
    marginals.emplace_back(d, 1.0 / static_cast<double>(d));
  }
  return independent_to_tt(marginals);
}

TensorTrain independent_to_tt(const std::vector<std::vector<double>>& marginals) {
  if (marginals.empty()) throw ValidationError("independent distribution needs a site");
  std::vector<DenseTensor> cores;
  for (std::size_t t = 0; t < marginals.size(); ++t) {
    check_probability_vector(marginals[t], "marginal at site " + std::to_string(t + 1));
    cores.emplace_back(Shape{1, marginals[t].size(), 1}, marginals[t]);
  }
  return TensorTrain(std::move(cores));
}

TensorTrain empirical_to_tt(const std::vector<Instance>& rows,
                            const std::vector<std::size_t>& dims) {
  if (rows.empty()) throw ValidationError("empirical dataset is empty");
  const std::size_t n = dims.size();
  if (n == 0) throw ValidationError("empirical distribution needs a site");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n) {
      throw ValidationError("row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " values, expected " +
                            std::to_string(n));
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (rows[r][t] < 1 || rows[r][t] > dims[t]) {
        throw ValidationError("row " + std::to_string(r + 1) + " site " + std::to_string(t + 1) +
                              " symbol out of range");
      }
    }
  }
  const std::size_t m = rows.size();
  const double w = 1.0 / static_cast<double>(m);
  std::vector<DenseTensor> cores;
  if (n == 1) {
    DenseTensor core({1, dims[0], 1});
    for (const Instance& row : rows) core.at({0, row[0] - 1, 0}) += w;
    cores.push_back(std::move(core));
    return TensorTrain(std::move(cores));
  }
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t left = t == 0 ? 1 : m;
    const std::size_t right = t + 1 == n ? 1 : m;
    DenseTensor core({left, dims[t], right});
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t v = rows[r][t] - 1;
      if (t == 0) {
        core.at({0, v, r}) = w;
      } else if (t + 1 == n) {
        core.at({r, v, 0}) = 1.0;
      } else {
        core.at({r, v, r}) = 1.0;
      }
    }
    cores.push_back(std::move(core));
  }
  return TensorTrain(std::move(cores));
}

TensorTrain markov_to_tt(const std::vector<double>& initial,
                         const std::vector<Matrix>& transitions, std::size_t length) {
  if (length == 0) throw ValidationError("markov chain length must be positive");
  check_probability_vector(initial, "initial distribution");
  const std::size_t a = initial.size();
  if (length > 1 && transitions.size() != 1 && transitions.size() != length - 1) {
    throw ValidationError("markov chain of length " + std::to_string(length) + " needs 1 or " +
                          std::to_string(length - 1) + " transition matrices, got " +
                          std::to_string(transitions.size()));
  }
  for (std::size_t k = 0; k < transitions.size(); ++k) {
    if (transitions[k].size() != a) {
      throw ValidationError("transition " + std::to_string(k + 1) + " must have " +
                            std::to_string(a) + " rows");
    }
    for (std::size_t u = 0; u < a; ++u) {
      if (transitions[k][u].size() != a) {
        throw ValidationError("transition " + std::to_string(k + 1) + " must be square");
      }
      check_probability_vector(transitions[k][u], "transition " + std::to_string(k + 1) +
                                                      " row " + std::to_string(u + 1));
    }
  }
  std::vector<DenseTensor> cores;
  if (length == 1) {
    cores.emplace_back(Shape{1, a, 1}, initial);
    return TensorTrain(std::move(cores));
  }
  auto step = [&](std::size_t t) -> const Matrix& {
    return transitions.size() == 1 ? transitions[0] : transitions[t - 1];
  };
  DenseTensor first({1, a, a});
  for (std::size_t v = 0; v < a; ++v) first.at({0, v, v}) = initial[v];
  cores.push_back(std::move(first));
  for (std::size_t t = 1; t < length; ++t) {
    const bool last = t + 1 == length;
    DenseTensor core({a, a, last ? 1 : a});
    const Matrix& T = step(t);
    for (std::size_t u = 0; u < a; ++u) {
      for (std::size_t v = 0; v < a; ++v) core.at({u, v, last ? 0 : v}) = T[u][v];
    }
    cores.push_back(std::move(core));
  }
  return TensorTrain(std::move(cores));
}

DistributionReport validate_distribution(const TensorTrain& tt, bool exhaustive) {
  DistributionReport report;
  report.mass = distribution_mass(tt);
  if (exhaustive) {
    const auto dims = tt.physical_dims();
    std::size_t domain = 1;
    bool small = true;
    for (std::size_t d : dims) {
      domain *= d;
      if (domain > kExhaustiveDistributionCap) {
        small = false;
        break;
      }
    }
    if (small) {
      const DenseTensor dense = tt_to_dense(tt, kExhaustiveDistributionCap);
      report.min_entry = *std::min_element(dense.values().begin(), dense.values().end());
    }
  }
  return report;
}

TensorTrain compile_distribution(const DistributionSpec& spec) {
  if (spec.kind == "uniform") return uniform_to_tt(spec.dims);
  if (spec.kind == "independent") return independent_to_tt(spec.marginals);
  if (spec.kind == "empirical") return empirical_to_tt(spec.rows, spec.dims);
  if (spec.kind == "markov") {
    return markov_to_tt(spec.initial, spec.transitions, spec.length);
  }
  if (spec.kind == "tt") {
    if (spec.tt.length() == 0) throw ValidationError("distribution train is empty");
    return spec.tt;
  }
  throw ValidationError("unknown distribution kind '" + spec.kind + "'");
}

}  // namespace ttshap
