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

#include "ttshap/tensor_train.h"

#include <algorithm>
#include <string>

#include "ttshap/errors.h"
#include "ttshap/parallel.h"

namespace ttshap {

TensorTrain::TensorTrain(std::vector<DenseTensor> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw ValidationError("tensor train needs at least one core");
  for (std::size_t t = 0; t < cores_.size(); ++t) {
    if (cores_[t].order() != 3) {
      throw ShapeError("core " + std::to_string(t + 1) + " has order " +
                       std::to_string(cores_[t].order()) + ", expected 3");
    }
    if (t > 0 && cores_[t - 1].shape()[2] != cores_[t].shape()[0]) {
      throw ShapeError("bond mismatch between cores " + std::to_string(t) + " and " +
                       std::to_string(t + 1) + ": " +
                       std::to_string(cores_[t - 1].shape()[2]) + " vs " +
                       std::to_string(cores_[t].shape()[0]));
    }
  }
}

std::size_t TensorTrain::left_boundary() const { return cores_.front().shape()[0]; }

std::size_t TensorTrain::right_boundary() const { return cores_.back().shape()[2]; }

std::vector<std::size_t> TensorTrain::physical_dims() const {
  std::vector<std::size_t> dims;
  dims.reserve(cores_.size());
  for (const auto& c : cores_) dims.push_back(c.shape()[1]);
  return dims;
}

std::size_t TensorTrain::bond(std::size_t t) const {
  if (t == cores_.size()) return right_boundary();
  return cores_.at(t).shape()[0];
}

std::size_t TensorTrain::max_bond() const {
  std::size_t m = 0;
  for (std::size_t t = 1; t < cores_.size(); ++t) m = std::max(m, bond(t));
  return m;
}

DenseTensor TensorTrain::slice(std::size_t site, std::size_t symbol) const {
  const DenseTensor& c = cores_.at(site);
  const std::size_t l = c.shape()[0], n = c.shape()[1], r = c.shape()[2];
  if (symbol < 1 || symbol > n) {
    throw IndexError("symbol " + std::to_string(symbol) + " at site " +
                     std::to_string(site + 1) + " outside [1," + std::to_string(n) + "]");
  }
  std::vector<double> out(l * r);
  const auto v = c.values();
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = 0; b < r; ++b) out[a * r + b] = v[(a * n + symbol - 1) * r + b];
  }
  return DenseTensor({l, r}, std::move(out));
}

DenseTensor TensorTrain::weighted_slice_sum(std::size_t site,
                                            std::span<const double> weights) const {
  const DenseTensor& c = cores_.at(site);
  const std::size_t l = c.shape()[0], n = c.shape()[1], r = c.shape()[2];
  if (weights.size() != n) {
    throw ShapeError("site " + std::to_string(site + 1) + " has physical dimension " +
                     std::to_string(n) + ", got " + std::to_string(weights.size()) +
                     " weights");
  }
  std::vector<double> out(l * r, 0.0);
  const auto v = c.values();
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t s = 0; s < n; ++s) {
      if (weights[s] == 0.0) continue;
      for (std::size_t b = 0; b < r; ++b) out[a * r + b] += weights[s] * v[(a * n + s) * r + b];
    }
  }
  return DenseTensor({l, r}, std::move(out));
}

void TensorTrain::scale_core(std::size_t site, double factor) {
  for (double& v : cores_.at(site).mutable_values()) v *= factor;
}

DenseTensor tt_eval(const TensorTrain& tt, std::span<const std::size_t> x) {
  if (x.size() != tt.length()) {
    throw IndexError("instance has " + std::to_string(x.size()) + " symbols, train has " +
                     std::to_string(tt.length()) + " sites");
  }
  DenseTensor acc = tt.slice(0, x[0]);
  for (std::size_t t = 1; t < tt.length(); ++t) acc = matmul(acc, tt.slice(t, x[t]));
  return acc;
}

DenseTensor tt_to_dense(const TensorTrain& tt, std::size_t cap) {
  const auto dims = tt.physical_dims();
  const std::size_t left = tt.left_boundary();
  const std::size_t right = tt.right_boundary();
  std::size_t entries = left * right;
  for (std::size_t d : dims) {
    if (entries > cap / d) {
      throw ResourceError("dense materialization exceeds cap of " + std::to_string(cap) +
                          " entries");
    }
    entries *= d;
  }
  if (entries > cap) {
    throw ResourceError("dense materialization exceeds cap of " + std::to_string(cap) +
                        " entries");
  }
  // Sweep left to right keeping a (left * prefix) x bond matrix.
  DenseTensor acc = reshape(tt.core(0), {2, 1});
  for (std::size_t t = 1; t < tt.length(); ++t) {
    const DenseTensor& c = tt.core(t);
    DenseTensor step = matmul(acc, reshape(c, {1, 2}));
    acc = DenseTensor({step.shape()[0] * c.shape()[1], c.shape()[2]},
                      {step.values().begin(), step.values().end()});
  }
  Shape shape;
  if (left > 1) shape.push_back(left);
  shape.insert(shape.end(), dims.begin(), dims.end());
  if (right > 1) shape.push_back(right);
  return DenseTensor(std::move(shape), {acc.values().begin(), acc.values().end()});
}

ScanSchedule parse_schedule(std::string_view name) {
  if (name == "sequential") return ScanSchedule::kSequential;
  if (name == "tree") return ScanSchedule::kTree;
  throw ValidationError("unknown schedule '" + std::string(name) +
                        "' (expected sequential or tree)");
}

std::string_view schedule_name(ScanSchedule schedule) {
  return schedule == ScanSchedule::kTree ? "tree" : "sequential";
}

DenseTensor scan_product(std::span<const DenseTensor> ms, ScanSchedule schedule,
                         std::size_t threads, ScanStats* stats) {
  if (ms.empty()) throw ValidationError("scan over an empty list");
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms[k].order() != 2) {
      throw ShapeError("scan element " + std::to_string(k + 1) + " is not a matrix");
    }
    if (k > 0 && ms[k - 1].shape()[1] != ms[k].shape()[0]) {
      throw ShapeError("scan boundary between matrices " + std::to_string(k) + " and " +
                       std::to_string(k + 1) + ": " + std::to_string(ms[k - 1].shape()[1]) +
                       " vs " + std::to_string(ms[k].shape()[0]));
    }
  }
  ScanStats local;
  if (schedule == ScanSchedule::kSequential) {
    DenseTensor acc = ms[0];
    for (std::size_t k = 1; k < ms.size(); ++k) {
      acc = matmul(acc, ms[k]);
      ++local.products;
    }
    if (stats) *stats = local;
    return acc;
  }

  std::vector<DenseTensor> level(ms.begin(), ms.end());
  while (level.size() > 1) {
    const std::size_t pairs = level.size() / 2;
    std::vector<DenseTensor> next(pairs + level.size() % 2);
    parallel_for(pairs, threads, [&](std::size_t p) {
      next[p] = matmul(level[2 * p], level[2 * p + 1]);
    });
    if (level.size() % 2 == 1) next.back() = std::move(level.back());
    local.products += pairs;
    ++local.levels;
    level = std::move(next);
  }
  if (stats) *stats = local;
  return std::move(level.front());
}

}  // namespace ttshap
