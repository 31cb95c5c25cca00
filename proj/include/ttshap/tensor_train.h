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

#ifndef TTSHAP_TENSOR_TRAIN_H_
#define TTSHAP_TENSOR_TRAIN_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ttshap/dense_tensor.h"

namespace ttshap {

// An input instance: one 1-based symbol per site.
using Instance = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultDenseCap = std::size_t{1} << 20;

// Chain of order-3 cores (left bond, physical, right bond). The outer bonds
// are genuine legs: a model carries its output dimension on the right, the
// coalition-weight train carries the feature index on the left.
class TensorTrain {
 public:
  TensorTrain() = default;
  // Validates core orders and bond matching.
  explicit TensorTrain(std::vector<DenseTensor> cores);

  std::size_t length() const { return cores_.size(); }
  const std::vector<DenseTensor>& cores() const { return cores_; }
  const DenseTensor& core(std::size_t site) const { return cores_.at(site); }

  std::size_t left_boundary() const;
  std::size_t right_boundary() const;
  // Physical dimension of a 0-based site.
  std::size_t physical_dim(std::size_t site) const { return cores_.at(site).shape()[1]; }
  std::vector<std::size_t> physical_dims() const;
  // Bond between site t-1 and t for t in [0, length]; 0 and length are the
  // boundaries.
  std::size_t bond(std::size_t t) const;
  std::size_t max_bond() const;

  // Slice core(site)[:, symbol, :] as a matrix; symbol is 1-based.
  DenseTensor slice(std::size_t site, std::size_t symbol) const;
  // Sum over the physical leg of core(site) weighted by `weights`.
  DenseTensor weighted_slice_sum(std::size_t site, std::span<const double> weights) const;

  // Multiplies every entry of core(site) by `factor`.
  void scale_core(std::size_t site, double factor);

 private:
  std::vector<DenseTensor> cores_;
};

// Ordered product of core slices at x, a left_boundary x right_boundary matrix.
DenseTensor tt_eval(const TensorTrain& tt, std::span<const std::size_t> x);

// Full tensor with axes (left boundary if > 1, physical..., right boundary if
// > 1). Throws ResourceError when the number of entries exceeds `cap`.
DenseTensor tt_to_dense(const TensorTrain& tt, std::size_t cap = kDefaultDenseCap);

enum class ScanSchedule { kSequential, kTree };

ScanSchedule parse_schedule(std::string_view name);
std::string_view schedule_name(ScanSchedule schedule);

struct ScanStats {
  // Number of pairing levels performed by the tree schedule (0 for one
  // matrix, ceil(log2 k) otherwise); always 0 for the sequential schedule.
  std::size_t levels = 0;
  std::size_t products = 0;
};

// Product m_1 * m_2 * ... * m_k. The tree schedule multiplies neighbors
// (1,2), (3,4), ... level by level and promotes an odd trailing matrix
// unchanged, so its association tree depends only on k. Pairs within a level
// may run on up to `threads` workers; the result is identical for any thread
// count.
DenseTensor scan_product(std::span<const DenseTensor> ms, ScanSchedule schedule,
                         std::size_t threads = 1, ScanStats* stats = nullptr);

}  // namespace ttshap

#endif  // TTSHAP_TENSOR_TRAIN_H_
