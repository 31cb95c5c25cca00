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

#ifndef TTSHAP_BNN_H_
#define TTSHAP_BNN_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ttshap/automata.h"
#include "ttshap/dense_tensor.h"
#include "ttshap/tensor_train.h"

namespace ttshap {

// Binarized network in reified-cardinality form. A neuron fires iff at least
// `reified[j]` of its literals hold, where input i contributes x_i for weight
// +1 and not x_i for weight -1. Weight 0 means the input is not wired.
struct BnnLayer {
  std::vector<std::vector<int>> weights;  // neurons x fan-in
  std::vector<std::size_t> reified;
};

struct Bnn {
  std::size_t inputs = 0;
  std::vector<BnnLayer> layers;

  std::size_t outputs() const { return layers.empty() ? 0 : layers.back().reified.size(); }
};

inline constexpr std::size_t kMaxLookupWidth = 20;
inline constexpr std::size_t kDefaultBondCap = std::size_t{1} << 16;

void validate_bnn(const Bnn& bnn);

std::vector<bool> layer_forward(const BnnLayer& layer, const std::vector<bool>& in);

// Output activations (0 or 1) for an input of symbols (1 = -1/false, 2 = +1/true).
std::vector<double> bnn_forward(const Bnn& bnn, std::span<const std::size_t> x);

// Row p is the output for first-layer pattern p; neuron 1 is the most
// significant bit of p.
DenseTensor bnn_collapse_lookup(const Bnn& bnn);

// (R_max + 1)^{W_1}, saturating at SIZE_MAX.
std::size_t bnn_bond_bound(const Bnn& bnn);

TensorTrain bnn_to_tt(const Bnn& bnn, std::size_t bond_cap = kDefaultBondCap);

// One hidden neuron per clause firing when some literal holds, and an output
// neuron firing when every clause neuron does.
Bnn cnf_to_bnn(const CnfFormula& cnf);

enum class CountRoute { kViaBnn, kViaClauseLdfas };
CountRoute parse_count_route(std::string_view name);

// 2^n times the expectation of the compiled formula under the uniform
// distribution.
std::size_t cnf_model_count(const CnfFormula& cnf, CountRoute route,
                            std::size_t bond_cap = kDefaultBondCap);

}  // namespace ttshap

#endif  // TTSHAP_BNN_H_
