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

#ifndef TTSHAP_MODEL_COMPILERS_H_
#define TTSHAP_MODEL_COMPILERS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ttshap/dense_tensor.h"
#include "ttshap/shap_engine.h"
#include "ttshap/tensor_train.h"

namespace ttshap {

// Decision tree over discrete features. Internal nodes split on a 1-based
// feature; each edge lists the 1-based symbols routed to its child. Leaves
// carry an output vector (a one-hot label for classifiers).
struct TreeEdge {
  std::vector<std::size_t> values;
  std::size_t child = 0;
};

struct TreeNode {
  std::size_t feature = 0;  // 0 marks a leaf
  std::vector<TreeEdge> edges;
  std::vector<double> value;

  bool is_leaf() const { return feature == 0; }
};

struct DecisionTree {
  std::vector<std::size_t> dims;
  std::vector<TreeNode> nodes;
  std::size_t root = 0;
  std::size_t outputs = 1;
};

// Checks edge coverage, feature reuse along paths, acyclicity and leaf arity.
void validate_tree(const DecisionTree& tree);
std::vector<double> evaluate_tree(const DecisionTree& tree, std::span<const std::size_t> x);

// One conjunct per constrained feature: x_feature must take one of the allowed
// symbols (allowed[v-1] for symbol v).
struct Predicate {
  std::size_t feature = 0;
  std::vector<bool> allowed;
};

struct Clause {
  std::vector<Predicate> predicates;
};

struct DisjointDnf {
  std::vector<std::size_t> dims;
  std::vector<Clause> clauses;
  std::vector<std::vector<double>> leaf_values;
  std::size_t outputs = 1;
};

// One clause per leaf. With drop_zero_leaves, leaves whose output is all zero
// are omitted unless that would leave no clause at all.
DisjointDnf tree_to_dnf(const DecisionTree& tree, bool drop_zero_leaves = true);

// Throws ValidationError with a witness input if two clauses overlap.
void check_disjoint(const DisjointDnf& dnf);

// Bond dimension equals the clause count; cores are diagonal in the clause
// bond.
TensorTrain dnf_to_tt(const DisjointDnf& dnf);
TensorTrain tree_to_tt(const DecisionTree& tree);

std::vector<double> evaluate_ensemble(std::span<const DecisionTree> trees,
                                      std::span<const double> weights,
                                      std::span<const std::size_t> x);

ShapMatrix ensemble_shap(std::span<const DecisionTree> trees, std::span<const double> weights,
                         const TensorTrain& dist, std::span<const std::size_t> x,
                         ScanSchedule schedule = ScanSchedule::kTree, std::size_t threads = 1);

// h_t[o] = sum_i h_{t-1}[i] T[i, x_t, o] + sum_i U[o, i] h_{t-1}[i] + W[o, x_t] + b[o]
// y = O^T h_n
struct LinearRnn {
  std::size_t d = 0;
  std::size_t alphabet = 0;
  std::vector<double> h0;
  DenseTensor T;  // d x N x d
  DenseTensor W;  // d x N
  DenseTensor U;  // d x d
  std::vector<double> b;
  DenseTensor O;  // d x n_out

  std::size_t outputs() const { return O.order() == 2 ? O.shape()[1] : 0; }
};

void validate_rnn(const LinearRnn& rnn);
std::vector<double> rnn_rollout(const LinearRnn& rnn, std::span<const std::size_t> x);
TensorTrain rnn_to_tt(const LinearRnn& rnn, std::size_t length);

// f(x) = bias + sum_i values[i][x_i - 1].
struct LinearModel {
  std::vector<std::vector<double>> values;
  double bias = 0.0;
};

double evaluate_linear(const LinearModel& model, std::span<const std::size_t> x);
TensorTrain linear_to_tt(const LinearModel& model);

}  // namespace ttshap

#endif  // TTSHAP_MODEL_COMPILERS_H_
