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

#include "ttshap/model_compilers.h"

#include <algorithm>
#include <string>
#include <utility>

#include "ttshap/errors.h"

namespace ttshap {
namespace {

std::string node_label(std::size_t k) { return "node " + std::to_string(k); }

void validate_subtree(const DecisionTree& tree, std::size_t k, std::vector<bool>& on_path) {
  if (k >= tree.nodes.size()) {
    throw ValidationError("child index " + std::to_string(k) + " has no node");
  }
  const TreeNode& node = tree.nodes[k];
  if (node.is_leaf()) {
    if (node.value.size() != tree.outputs) {
      throw ValidationError(node_label(k) + " leaf has " + std::to_string(node.value.size()) +
                            " outputs, expected " + std::to_string(tree.outputs));
    }
    return;
  }
  const std::size_t f = node.feature;
  if (f > tree.dims.size()) {
    throw ValidationError(node_label(k) + " splits on feature " + std::to_string(f) +
                          " of " + std::to_string(tree.dims.size()));
  }
  if (on_path[f - 1]) {
    throw ValidationError(node_label(k) + " repeats feature " + std::to_string(f) +
                          " on its path");
  }
  std::vector<int> owner(tree.dims[f - 1], -1);
  for (std::size_t e = 0; e < node.edges.size(); ++e) {
    for (std::size_t v : node.edges[e].values) {
      if (v < 1 || v > owner.size()) {
        throw ValidationError(node_label(k) + " edge uses symbol " + std::to_string(v) +
                              " outside feature " + std::to_string(f) + "'s domain");
      }
      if (owner[v - 1] >= 0) {
        throw ValidationError(node_label(k) + " routes symbol " + std::to_string(v) +
                              " along two edges");
      }
      owner[v - 1] = static_cast<int>(e);
    }
  }
  for (std::size_t v = 0; v < owner.size(); ++v) {
    if (owner[v] < 0) {
      throw ValidationError(node_label(k) + " has no edge for symbol " + std::to_string(v + 1));
    }
  }
  on_path[f - 1] = true;
  for (const TreeEdge& edge : node.edges) validate_subtree(tree, edge.child, on_path);
  on_path[f - 1] = false;
}

void collect_clauses(const DecisionTree& tree, std::size_t k, std::vector<Predicate>& path,
                     DisjointDnf& out) {
  const TreeNode& node = tree.nodes[k];
  if (node.is_leaf()) {
    Clause clause{path};
    std::sort(clause.predicates.begin(), clause.predicates.end(),
              [](const Predicate& a, const Predicate& b) { return a.feature < b.feature; });
    out.clauses.push_back(std::move(clause));
    out.leaf_values.push_back(node.value);
    return;
  }
  for (const TreeEdge& edge : node.edges) {
    Predicate p{node.feature, std::vector<bool>(tree.dims[node.feature - 1], false)};
    for (std::size_t v : edge.values) p.allowed[v - 1] = true;
    path.push_back(std::move(p));
    collect_clauses(tree, edge.child, path, out);
    path.pop_back();
  }
}

// Allowed-symbol masks of a clause for every feature (all true when free).
std::vector<std::vector<bool>> clause_masks(const DisjointDnf& dnf, std::size_t c) {
  std::vector<std::vector<bool>> masks;
  for (std::size_t d : dnf.dims) masks.emplace_back(d, true);
  for (const Predicate& p : dnf.clauses[c].predicates) {
    if (p.feature < 1 || p.feature > dnf.dims.size()) {
      throw ValidationError("clause " + std::to_string(c + 1) + " constrains feature " +
                            std::to_string(p.feature) + " of " +
                            std::to_string(dnf.dims.size()));
    }
    if (p.allowed.size() != dnf.dims[p.feature - 1]) {
      throw ValidationError("clause " + std::to_string(c + 1) + " mask for feature " +
                            std::to_string(p.feature) + " has the wrong length");
    }
    auto& mask = masks[p.feature - 1];
    if (!std::all_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
      throw ValidationError("clause " + std::to_string(c + 1) + " constrains feature " +
                            std::to_string(p.feature) + " twice");
    }
    mask = p.allowed;
  }
  return masks;
}

std::string format_instance(std::span<const std::size_t> x) {
  std::string s = "(";
  for (std::size_t t = 0; t < x.size(); ++t) s += (t ? "," : "") + std::to_string(x[t]);
  return s + ")";
}

}  // namespace

void validate_tree(const DecisionTree& tree) {
  if (tree.dims.empty()) throw ValidationError("tree needs at least one feature");
  for (std::size_t d : tree.dims) {
    if (d == 0) throw ValidationError("feature dimensions must be positive");
  }
  if (tree.outputs == 0) throw ValidationError("tree needs at least one output");
  if (tree.nodes.empty()) throw ValidationError("tree has no nodes");
  std::vector<bool> on_path(tree.dims.size(), false);
  validate_subtree(tree, tree.root, on_path);
}

std::vector<double> evaluate_tree(const DecisionTree& tree, std::span<const std::size_t> x) {
  if (x.size() != tree.dims.size()) throw ShapeError("instance length does not match the tree");
  std::size_t k = tree.root;
  while (!tree.nodes.at(k).is_leaf()) {
    const TreeNode& node = tree.nodes[k];
    const std::size_t v = x[node.feature - 1];
    auto it = std::find_if(node.edges.begin(), node.edges.end(), [v](const TreeEdge& e) {
      return std::find(e.values.begin(), e.values.end(), v) != e.values.end();
    });
    if (it == node.edges.end()) {
      throw IndexError("symbol " + std::to_string(v) + " at feature " +
                       std::to_string(node.feature) + " has no edge");
    }
    k = it->child;
  }
  return tree.nodes[k].value;
}

DisjointDnf tree_to_dnf(const DecisionTree& tree, bool drop_zero_leaves) {
  validate_tree(tree);
  DisjointDnf all{tree.dims, {}, {}, tree.outputs};
  std::vector<Predicate> path;
  collect_clauses(tree, tree.root, path, all);
  if (!drop_zero_leaves) return all;

  DisjointDnf kept{tree.dims, {}, {}, tree.outputs};
  for (std::size_t c = 0; c < all.clauses.size(); ++c) {
    const auto& v = all.leaf_values[c];
    if (std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; })) continue;
    kept.clauses.push_back(all.clauses[c]);
    kept.leaf_values.push_back(v);
  }
  if (kept.clauses.empty()) {
    kept.clauses.push_back(all.clauses.front());
    kept.leaf_values.push_back(all.leaf_values.front());
  }
  return kept;
}

void check_disjoint(const DisjointDnf& dnf) {
  std::vector<std::vector<std::vector<bool>>> masks;
  for (std::size_t c = 0; c < dnf.clauses.size(); ++c) masks.push_back(clause_masks(dnf, c));
  for (std::size_t a = 0; a < masks.size(); ++a) {
    for (std::size_t b = a + 1; b < masks.size(); ++b) {
      Instance witness(dnf.dims.size(), 0);
      bool overlap = true;
      for (std::size_t f = 0; f < dnf.dims.size() && overlap; ++f) {
        overlap = false;
        for (std::size_t v = 0; v < dnf.dims[f]; ++v) {
          if (masks[a][f][v] && masks[b][f][v]) {
            witness[f] = v + 1;
            overlap = true;
            break;
          }
        }
      }
      if (overlap) {
        throw ValidationError("clauses " + std::to_string(a + 1) + " and " +
                              std::to_string(b + 1) + " both hold at " +
                              format_instance(witness));
      }
    }
  }
}

TensorTrain dnf_to_tt(const DisjointDnf& dnf) {
  const std::size_t n = dnf.dims.size();
  const std::size_t L = dnf.clauses.size();
  if (n == 0) throw ValidationError("DNF needs at least one feature");
  if (L == 0) throw ValidationError("DNF needs at least one clause");
  if (dnf.leaf_values.size() != L) {
    throw ValidationError("DNF has " + std::to_string(L) + " clauses but " +
                          std::to_string(dnf.leaf_values.size()) + " leaf values");
  }
  for (std::size_t c = 0; c < L; ++c) {
    if (dnf.leaf_values[c].size() != dnf.outputs) {
      throw ValidationError("leaf value " + std::to_string(c + 1) + " has the wrong length");
    }
  }
  check_disjoint(dnf);
  std::vector<std::vector<std::vector<bool>>> masks;
  for (std::size_t c = 0; c < L; ++c) masks.push_back(clause_masks(dnf, c));

  std::vector<DenseTensor> cores;
  for (std::size_t t = 0; t < n; ++t) {
    const bool first = t == 0;
    const bool last = t + 1 == n;
    const std::size_t left = first ? 1 : L;
    const std::size_t right = last ? dnf.outputs : L;
    DenseTensor core({left, dnf.dims[t], right});
    for (std::size_t k = 0; k < L; ++k) {
      for (std::size_t v = 0; v < dnf.dims[t]; ++v) {
        if (!masks[k][t][v]) continue;
        const std::size_t row = first ? 0 : k;
        if (last) {
          for (std::size_t o = 0; o < dnf.outputs; ++o) {
            core.at({row, v, o}) += dnf.leaf_values[k][o];
          }
        } else {
          core.at({row, v, k}) = 1.0;
        }
      }
    }
    cores.push_back(std::move(core));
  }
  return TensorTrain(std::move(cores));
}

TensorTrain tree_to_tt(const DecisionTree& tree) { return dnf_to_tt(tree_to_dnf(tree)); }

std::vector<double> evaluate_ensemble(std::span<const DecisionTree> trees,
                                      std::span<const double> weights,
                                      std::span<const std::size_t> x) {
  if (trees.empty() || trees.size() != weights.size()) {
    throw ValidationError("ensemble needs one weight per tree");
  }
  std::vector<double> total;
  for (std::size_t k = 0; k < trees.size(); ++k) {
    const std::vector<double> y = evaluate_tree(trees[k], x);
    if (total.empty()) total.assign(y.size(), 0.0);
    if (y.size() != total.size()) throw ShapeError("ensemble trees disagree on output size");
    for (std::size_t o = 0; o < y.size(); ++o) total[o] += weights[k] * y[o];
  }
  return total;
}

ShapMatrix ensemble_shap(std::span<const DecisionTree> trees, std::span<const double> weights,
                         const TensorTrain& dist, std::span<const std::size_t> x,
                         ScanSchedule schedule, std::size_t threads) {
  if (trees.empty() || trees.size() != weights.size()) {
    throw ValidationError("ensemble needs one weight per tree");
  }
  ShapMatrix total;
  for (std::size_t k = 0; k < trees.size(); ++k) {
    ShapMatrix part;
    try {
      part = shap_tt(tree_to_tt(trees[k]), dist, x, schedule, threads);
    } catch (const Error& e) {
      rethrow_with_context(e, "tree " + std::to_string(k + 1));
    }
    if (k == 0) {
      total.values = DenseTensor(part.values.shape());
    } else if (part.values.shape() != total.values.shape()) {
      throw ShapeError("tree " + std::to_string(k + 1) + " has a different output size");
    }
    auto dst = total.values.mutable_values();
    auto src = part.values.values();
    for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += weights[k] * src[e];
  }
  return total;
}

void validate_rnn(const LinearRnn& rnn) {
  const std::size_t d = rnn.d, a = rnn.alphabet;
  if (d == 0 || a == 0) throw ValidationError("rnn state size and alphabet must be positive");
  auto expect = [](const DenseTensor& t, const Shape& shape, const char* name) {
    if (t.shape() != shape) throw ValidationError(std::string("rnn ") + name + " has the wrong shape");
  };
  if (rnn.h0.size() != d) throw ValidationError("rnn h0 has the wrong length");
  if (rnn.b.size() != d) throw ValidationError("rnn b has the wrong length");
  expect(rnn.T, {d, a, d}, "T");
  expect(rnn.W, {d, a}, "W");
  expect(rnn.U, {d, d}, "U");
  if (rnn.O.order() != 2 || rnn.O.shape()[0] != d || rnn.O.shape()[1] == 0) {
    throw ValidationError("rnn O must be d x n_out");
  }
}

std::vector<double> rnn_rollout(const LinearRnn& rnn, std::span<const std::size_t> x) {
  validate_rnn(rnn);
  const std::size_t d = rnn.d;
  std::vector<double> h = rnn.h0, next(d);
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (x[t] < 1 || x[t] > rnn.alphabet) {
      throw IndexError("symbol " + std::to_string(x[t]) + " at site " + std::to_string(t + 1) +
                       " outside the alphabet");
    }
    const std::size_t s = x[t] - 1;
    for (std::size_t o = 0; o < d; ++o) {
      double acc = rnn.W.at({o, s}) + rnn.b[o];
      for (std::size_t i = 0; i < d; ++i) {
        acc += h[i] * rnn.T.at({i, s, o}) + rnn.U.at({o, i}) * h[i];
      }
      next[o] = acc;
    }
    h.swap(next);
  }
  std::vector<double> y(rnn.outputs(), 0.0);
  for (std::size_t o = 0; o < y.size(); ++o) {
    for (std::size_t i = 0; i < d; ++i) y[o] += rnn.O.at({i, o}) * h[i];
  }
  return y;
}

TensorTrain rnn_to_tt(const LinearRnn& rnn, std::size_t length) {
  validate_rnn(rnn);
  if (length == 0) throw ValidationError("rnn window must be positive");
  const std::size_t d = rnn.d, a = rnn.alphabet, D = d + 1;
  // Augmented transition per symbol acting on row vectors (h, 1).
  DenseTensor step({D, a, D});
  for (std::size_t s = 0; s < a; ++s) {
    for (std::size_t o = 0; o < d; ++o) {
      for (std::size_t i = 0; i < d; ++i) {
        step.at({i, s, o}) = rnn.T.at({i, s, o}) + rnn.U.at({o, i});
      }
      step.at({d, s, o}) = rnn.W.at({o, s}) + rnn.b[o];
    }
    step.at({d, s, d}) = 1.0;
  }
  std::vector<double> start = rnn.h0;
  start.push_back(1.0);
  const DenseTensor left({1, D}, start);
  DenseTensor readout({D, rnn.outputs()});
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t o = 0; o < rnn.outputs(); ++o) readout.at({i, o}) = rnn.O.at({i, o});
  }
  std::vector<DenseTensor> cores(length, step);
  cores.front() = contract(left, cores.front(), {{2, 1}});
  cores.back() = contract(cores.back(), readout, {{3, 1}});
  return TensorTrain(std::move(cores));
}

double evaluate_linear(const LinearModel& model, std::span<const std::size_t> x) {
  if (x.size() != model.values.size()) throw ShapeError("instance length does not match the model");
  double y = model.bias;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (x[t] < 1 || x[t] > model.values[t].size()) {
      throw IndexError("symbol " + std::to_string(x[t]) + " at site " + std::to_string(t + 1) +
                       " out of range");
    }
    y += model.values[t][x[t] - 1];
  }
  return y;
}

TensorTrain linear_to_tt(const LinearModel& model) {
  const std::size_t n = model.values.size();
  if (n == 0) throw ValidationError("linear model needs a feature");
  std::vector<DenseTensor> cores;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t a = model.values[t].size();
    if (a == 0) throw ValidationError("feature " + std::to_string(t + 1) + " has no values");
    DenseTensor core({2, a, 2});
    for (std::size_t s = 0; s < a; ++s) {
      core.at({0, s, 0}) = 1.0;
      core.at({0, s, 1}) = model.values[t][s];
      core.at({1, s, 1}) = 1.0;
    }
    cores.push_back(std::move(core));
  }
  const DenseTensor left({1, 2}, {1.0, model.bias});
  const DenseTensor right({2, 1}, {0.0, 1.0});
  cores.front() = contract(left, cores.front(), {{2, 1}});
  cores.back() = contract(cores.back(), right, {{3, 1}});
  return TensorTrain(std::move(cores));
}

}  // namespace ttshap
