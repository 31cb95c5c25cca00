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

#ifndef TTSHAP_COALITION_WEIGHTS_H_
#define TTSHAP_COALITION_WEIGHTS_H_

#include <cstddef>
#include <span>

#include "ttshap/dense_tensor.h"
#include "ttshap/tensor_train.h"

namespace ttshap {

// Coalition switches use symbol 2 for "feature kept from the instance" (in the
// coalition) and symbol 1 for "feature resampled from the distribution".
inline constexpr std::size_t kDropped = 1;
inline constexpr std::size_t kKept = 2;

// Shapley kernel W(S) = |S|! (n - |S| - 1)! / n! for a coalition that excludes
// the explained feature.
double shapley_weight(std::size_t coalition_size, std::size_t n);

// Entry (i, s) of the signed coalition tensor: +W(S) when feature i is kept,
// -W(S) when it is dropped, with S the kept features other than i. The
// feature index i is 1-based.
double signed_coefficient(std::span<const std::size_t> switches, std::size_t i,
                          std::size_t n);

inline constexpr std::size_t kMaxDenseWeightFeatures = 12;

// Dense tensor of shape n x 2 x ... x 2 holding signed_coefficient.
DenseTensor weight_tensor_dense(std::size_t n);

// Train form of the signed coalition tensor: left boundary n (feature index),
// physical dimension 2 per site, internal bonds n^2 and right boundary 1.
struct WeightCoreSet {
  std::size_t n = 0;
  TensorTrain train;
};

// Internal bond index of state (feature i, kept count k), both 0-based.
inline std::size_t weight_state_index(std::size_t n, std::size_t i, std::size_t k) {
  return i * n + k;
}

WeightCoreSet weight_cores(std::size_t n);

// Row i (1-based) of weight_cores(n): the feature leg is conserved along the
// chain, so each row is an independent train with boundaries 1 and internal
// bond n (the kept-count k).
TensorTrain weight_cores_for_feature(std::size_t n, std::size_t i);

}  // namespace ttshap

#endif  // TTSHAP_COALITION_WEIGHTS_H_
