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

#ifndef TTSHAP_VALUE_ROUTER_H_
#define TTSHAP_VALUE_ROUTER_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ttshap/dense_tensor.h"
#include "ttshap/tensor_train.h"

namespace ttshap {

// 0/1 tensor of shape N x 2 x N x N over (instance value, switch, sampled
// value, routed value). The routed value is the instance value when the switch
// is 2 and the sampled value when it is 1.
struct RouterTensor {
  std::size_t n = 0;
  DenseTensor tensor;
};

RouterTensor router_tensor(std::size_t n);

// Number of points of the product domain [N_1] x ... x [N_n].
std::size_t domain_size(std::span<const std::size_t> dims);

// Advances a 1-based point to its row-major successor (last site fastest).
// Returns false after the last point, leaving x at the first point again.
bool next_point(std::span<std::size_t> x, std::span<const std::size_t> dims);

// Throws IndexError naming the site when x is not a point of the domain.
void check_instance(std::span<const std::size_t> x, std::span<const std::size_t> dims);

// A distribution given by its nonzero support.
struct EnumerableDistribution {
  std::vector<std::size_t> dims;
  std::vector<Instance> points;
  std::vector<double> probabilities;
};

// Enumerates every point of the domain; throws ResourceError beyond `cap`.
EnumerableDistribution enumerate_distribution(const TensorTrain& dist,
                                              std::size_t cap = kDefaultDenseCap);
EnumerableDistribution enumerate_distribution(const DenseTensor& dist);

using ModelEvaluator = std::function<std::vector<double>(std::span<const std::size_t>)>;

// Evaluator backed by tt_eval; requires left boundary 1.
ModelEvaluator tt_evaluator(TensorTrain model);
// Evaluator over a dense tensor with axes (N_1, ..., N_n, n_out).
ModelEvaluator dense_evaluator(DenseTensor model);

// E_{x'~P}[f(y)] with y_i = x_i where switches_i == 2 and x'_i otherwise.
std::vector<double> marginal_value(const ModelEvaluator& model,
                                   const EnumerableDistribution& dist,
                                   std::span<const std::size_t> x,
                                   std::span<const std::size_t> switches);

}  // namespace ttshap

#endif  // TTSHAP_VALUE_ROUTER_H_
