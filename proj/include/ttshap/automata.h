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

#ifndef TTSHAP_AUTOMATA_H_
#define TTSHAP_AUTOMATA_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttshap/tensor_train.h"

namespace ttshap {

// Layered deterministic automaton. Layer 0 holds the single initial state;
// reading symbol x_l moves from layer l-1 to layer l. transitions[l-1] is a
// row-major (state, symbol) table of target states, -1 where undefined.
struct Ldfa {
  std::size_t alphabet = 2;
  std::vector<std::size_t> state_counts;
  std::vector<std::vector<int>> transitions;
  std::vector<bool> accepting;

  std::size_t layers() const { return transitions.size(); }
  int next(std::size_t layer, std::size_t state, std::size_t symbol) const {
    return transitions[layer][state * alphabet + (symbol - 1)];
  }
};

void validate_ldfa(const Ldfa& a);

// Final state reached on x, or nothing when a transition is undefined.
std::optional<std::size_t> ldfa_run(const Ldfa& a, std::span<const std::size_t> x);
bool ldfa_accepts(const Ldfa& a, std::span<const std::size_t> x);

// Boolean variables use symbol 1 for false (or -1) and symbol 2 for true (or +1).
inline constexpr std::size_t kFalseSymbol = 1;
inline constexpr std::size_t kTrueSymbol = 2;

// Literals are signed 1-based variable indices (DIMACS style).
using CnfClause = std::vector<int>;

struct CnfFormula {
  std::size_t variables = 0;
  std::vector<CnfClause> clauses;
};

void validate_cnf(const CnfFormula& cnf);
bool evaluate_cnf(const CnfFormula& cnf, std::span<const std::size_t> x);
std::size_t brute_force_model_count(const CnfFormula& cnf);

CnfFormula parse_dimacs(const std::string& text);
CnfFormula read_dimacs(const std::string& path);

// Two states per layer: 0 while no literal holds yet, 1 once one does.
Ldfa clause_to_ldfa(const CnfClause& clause, std::size_t variables);

// Saturating counter of satisfied literals; accepts when the count reaches
// `threshold`. A weight of 0 leaves the input unconnected.
Ldfa neuron_to_ldfa(std::span<const int> weights, std::size_t threshold);

// Intersection automaton. State (s_1, ..., s_k) is numbered mixed-radix with
// the first automaton most significant.
Ldfa ldfa_product(std::span<const Ldfa> automata);

// 0/1 train with core(l)[s, v, s'] = 1 iff s --v--> s'. With open_final the
// last bond is left as the final-layer state leg instead of being summed
// against the accepting states.
TensorTrain ldfa_to_tt(const Ldfa& a, bool open_final = false);

// Train of the order-k copy tensor of dimension d.
TensorTrain copy_tensor_tt(std::size_t order, std::size_t dim);

}  // namespace ttshap

#endif  // TTSHAP_AUTOMATA_H_
