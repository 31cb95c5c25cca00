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

#include "ttshap/value_router.h"

#include <string>
#include <utility>

#include "ttshap/coalition_weights.h"
#include "ttshap/errors.h"

namespace ttshap {

RouterTensor router_tensor(std::size_t n) {
  if (n == 0) throw ValidationError("router alphabet must be nonempty");
  DenseTensor t({n, 2, n, n});
  for (std::size_t vx = 0; vx < n; ++vx) {
    for (std::size_t vp = 0; vp < n; ++vp) {
      t.at({vx, kKept - 1, vp, vx}) = 1.0;
      t.at({vx, kDropped - 1, vp, vp}) = 1.0;
    }
  }
  return {n, std::move(t)};
}

std::size_t domain_size(std::span<const std::size_t> dims) {
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d != 0 && total > static_cast<std::size_t>(-1) / d) return static_cast<std::size_t>(-1);
    total *= d;
  }
  return total;
}

bool next_point(std::span<std::size_t> x, std::span<const std::size_t> dims) {
  for (std::size_t t = x.size(); t-- > 0;) {
    if (x[t] < dims[t]) {
      ++x[t];
      return true;
    }
    x[t] = 1;
  }
  return false;
}

void check_instance(std::span<const std::size_t> x, std::span<const std::size_t> dims) {
  if (x.size() != dims.size()) {
    throw ShapeError("instance has " + std::to_string(x.size()) + " symbols, expected " +
                     std::to_string(dims.size()));
  }
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (x[t] < 1 || x[t] > dims[t]) {
      throw IndexError("symbol " + std::to_string(x[t]) + " at site " + std::to_string(t + 1) +
                       " outside [1," + std::to_string(dims[t]) + "]");
    }
  }
}

namespace {

EnumerableDistribution support_of(std::vector<std::size_t> dims, std::span<const double> mass) {
  EnumerableDistribution out;
  out.dims = std::move(dims);
  Instance x(out.dims.size(), 1);
  std::size_t k = 0;
  do {
    if (mass[k] != 0.0) {
      out.points.push_back(x);
      out.probabilities.push_back(mass[k]);
    }
    ++k;
  } while (next_point(x, out.dims));
  return out;
}

}  // namespace

EnumerableDistribution enumerate_distribution(const TensorTrain& dist, std::size_t cap) {
  if (dist.left_boundary() != 1 || dist.right_boundary() != 1) {
    throw ShapeError("distribution train must have unit boundaries");
  }
  const DenseTensor dense = tt_to_dense(dist, cap);
  return support_of(dist.physical_dims(), dense.values());
}

EnumerableDistribution enumerate_distribution(const DenseTensor& dist) {
  if (dist.order() == 0) throw ShapeError("distribution tensor needs at least one axis");
  return support_of(dist.shape(), dist.values());
}

ModelEvaluator tt_evaluator(TensorTrain model) {
  if (model.left_boundary() != 1) {
    throw ShapeError("model train must have left boundary 1, got " +
                     std::to_string(model.left_boundary()));
  }
  return [tt = std::move(model)](std::span<const std::size_t> x) {
    const DenseTensor y = tt_eval(tt, x);
    return std::vector<double>(y.values().begin(), y.values().end());
  };
}

ModelEvaluator dense_evaluator(DenseTensor model) {
  if (model.order() < 2) throw ShapeError("dense model needs input axes and an output axis");
  return [m = std::move(model)](std::span<const std::size_t> x) {
    const std::size_t n = m.order() - 1;
    if (x.size() != n) throw ShapeError("instance length does not match the dense model");
    const std::size_t outputs = m.shape()[n];
    std::size_t offset = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (x[t] < 1 || x[t] > m.shape()[t]) {
        throw IndexError("symbol out of range at site " + std::to_string(t + 1));
      }
      offset = offset * m.shape()[t] + (x[t] - 1);
    }
    const auto v = m.values().subspan(offset * outputs, outputs);
    return std::vector<double>(v.begin(), v.end());
  };
}

std::vector<double> marginal_value(const ModelEvaluator& model,
                                   const EnumerableDistribution& dist,
                                   std::span<const std::size_t> x,
                                   std::span<const std::size_t> switches) {
  check_instance(x, dist.dims);
  if (switches.size() != x.size()) throw ShapeError("switch vector length mismatch");
  std::vector<double> total;
  Instance y(x.size());
  for (std::size_t p = 0; p < dist.points.size(); ++p) {
    const Instance& sample = dist.points[p];
    for (std::size_t t = 0; t < x.size(); ++t) y[t] = switches[t] == kKept ? x[t] : sample[t];
    const std::vector<double> f = model(y);
    if (total.empty()) total.assign(f.size(), 0.0);
    for (std::size_t o = 0; o < f.size(); ++o) total[o] += dist.probabilities[p] * f[o];
  }
  if (total.empty()) total = std::vector<double>(model(x).size(), 0.0);
  return total;
}

}  // namespace ttshap
