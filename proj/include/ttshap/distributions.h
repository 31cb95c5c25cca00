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

#ifndef TTSHAP_DISTRIBUTIONS_H_
#define TTSHAP_DISTRIBUTIONS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ttshap/tensor_train.h"

namespace ttshap {

using Matrix = std::vector<std::vector<double>>;

inline constexpr double kProbabilityTolerance = 1e-9;

TensorTrain uniform_to_tt(const std::vector<std::size_t>& dims);

// Product distribution; bond dimension 1.
TensorTrain independent_to_tt(const std::vector<std::vector<double>>& marginals);

// Frequency tensor of a dataset of 1-based rows. Keeps one bond state per row.
TensorTrain empirical_to_tt(const std::vector<Instance>& rows,
                            const std::vector<std::size_t>& dims);

// First-order chain over a common alphabet. `transitions` holds either one
// matrix reused at every step or exactly length - 1 matrices.
TensorTrain markov_to_tt(const std::vector<double>& initial,
                         const std::vector<Matrix>& transitions, std::size_t length);

inline constexpr std::size_t kExhaustiveDistributionCap = std::size_t{1} << 16;

struct DistributionReport {
  double mass = 0.0;
  // Present when the pointwise scan ran.
  std::optional<double> min_entry;
};

DistributionReport validate_distribution(const TensorTrain& tt, bool exhaustive);

struct DistributionSpec {
  std::string kind;  // uniform | independent | empirical | markov | tt
  std::vector<std::size_t> dims;
  std::vector<std::vector<double>> marginals;
  std::vector<Instance> rows;
  std::vector<double> initial;
  std::vector<Matrix> transitions;
  std::size_t length = 0;
  TensorTrain tt;
};

TensorTrain compile_distribution(const DistributionSpec& spec);

}  // namespace ttshap

#endif  // TTSHAP_DISTRIBUTIONS_H_
