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

#include <gtest/gtest.h>

#include "test_support.h"
#include "ttshap/distributions.h"
#include "ttshap/errors.h"
#include "ttshap/value_router.h"

namespace ttshap {
namespace {

using testing::Rng;

// Splits on x1, then on x2 in both branches; output 1 iff x2 = 2.
DecisionTree second_bit_tree() {
  DecisionTree t;
  t.dims = {2, 2};
  t.nodes = {{1, {{{1}, 1}, {{2}, 2}}, {}}, {2, {{{1}, 3}, {{2}, 4}}, {}},
             {2, {{{1}, 5}, {{2}, 6}}, {}}, {0, {}, {0}},
             {0, {}, {1}},                    {0, {}, {0}},
             {0, {}, {1}}};
  return t;
}

double eval1(const TensorTrain& tt, const Instance& x) { return tt_eval(tt, x).values()[0]; }

TEST(TreeTest, EvaluateFollowsEdges) {
  const DecisionTree t = second_bit_tree();
  EXPECT_EQ(evaluate_tree(t, Instance{1, 2})[0], 1.0);
  EXPECT_EQ(evaluate_tree(t, Instance{2, 1})[0], 0.0);
  EXPECT_THROW(evaluate_tree(t, Instance{3, 1}), IndexError);
}

TEST(TreeTest, ValidationCatchesBadTrees) {
  DecisionTree repeat = second_bit_tree();
  repeat.nodes[1].feature = 1;
  EXPECT_THROW(validate_tree(repeat), ValidationError);

  DecisionTree gap = second_bit_tree();
  gap.nodes[0].edges.pop_back();
  EXPECT_THROW(validate_tree(gap), ValidationError);

  DecisionTree arity = second_bit_tree();
  arity.nodes[3].value = {0, 1};
  EXPECT_THROW(validate_tree(arity), ValidationError);

  DecisionTree twice = second_bit_tree();
  twice.nodes[0].edges[1].values = {1, 2};
  EXPECT_THROW(validate_tree(twice), ValidationError);
}

TEST(TreeToDnfTest, KeepsOnlyNonzeroLeaves) {
  const DisjointDnf dnf = tree_to_dnf(second_bit_tree());
  EXPECT_EQ(dnf.clauses.size(), 2u);
  for (const auto& v : dnf.leaf_values) EXPECT_EQ(v, std::vector<double>{1.0});
  EXPECT_EQ(tree_to_dnf(second_bit_tree(), false).clauses.size(), 4u);
}

TEST(TreeToDnfTest, SingleLeafGivesEmptyClause) {
  DecisionTree t;
  t.dims = {3, 2};
  t.nodes = {{0, {}, {7.0}}};
  const DisjointDnf dnf = tree_to_dnf(t);
  ASSERT_EQ(dnf.clauses.size(), 1u);
  EXPECT_TRUE(dnf.clauses[0].predicates.empty());
  EXPECT_EQ(dnf.leaf_values[0][0], 7.0);
  const TensorTrain tt = dnf_to_tt(dnf);
  Instance x{1, 1};
  do {
    EXPECT_EQ(eval1(tt, x), 7.0);
  } while (next_point(x, t.dims));
}

TEST(TreeToDnfTest, AllZeroTreeKeepsOneClause) {
  DecisionTree t;
  t.dims = {2};
  t.nodes = {{1, {{{1}, 1}, {{2}, 2}}, {}}, {0, {}, {0}}, {0, {}, {0}}};
  EXPECT_EQ(tree_to_dnf(t).clauses.size(), 1u);
  EXPECT_EQ(eval1(tree_to_tt(t), {2}), 0.0);
}

TEST(TreeToDnfTest, DepthOneSplit) {
  DecisionTree t;
  t.dims = {2, 2};
  t.nodes = {{2, {{{1}, 1}, {{2}, 2}}, {}}, {0, {}, {3}}, {0, {}, {5}}};
  const DisjointDnf dnf = tree_to_dnf(t);
  ASSERT_EQ(dnf.clauses.size(), 2u);
  for (std::size_t c = 0; c < 2; ++c) {
    ASSERT_EQ(dnf.clauses[c].predicates.size(), 1u);
    const Predicate& p = dnf.clauses[c].predicates[0];
    EXPECT_EQ(p.feature, 2u);
    EXPECT_EQ(p.allowed, (std::vector<bool>{c == 0, c == 1}));
  }
}

TEST(DnfToTtTest, SecondBitTreeHasBondTwo) {
  const TensorTrain tt = tree_to_tt(second_bit_tree());
  EXPECT_EQ(tt.max_bond(), 2u);
  EXPECT_EQ(eval1(tt, {1, 2}), 1.0);
  EXPECT_EQ(eval1(tt, {2, 2}), 1.0);
  EXPECT_EQ(eval1(tt, {1, 1}), 0.0);
  EXPECT_EQ(eval1(tt, {2, 1}), 0.0);
}

TEST(DnfToTtTest, BondEqualsClauseCount) {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dims = testing::random_dims(rng, testing::uniform_int(rng, 2, 5), 3);
    const DisjointDnf dnf = tree_to_dnf(testing::random_tree(rng, dims, 1, false), false);
    const TensorTrain tt = dnf_to_tt(dnf);
    EXPECT_EQ(tt.max_bond(), dnf.clauses.size());
  }
}

TEST(DnfToTtTest, OverlapReportsWitness) {
  DisjointDnf dnf;
  dnf.dims = {2, 3};
  dnf.clauses = {{{{1, {true, false}}}}, {{{2, {false, true, true}}}}};
  dnf.leaf_values = {{1.0}, {1.0}};
  try {
    dnf_to_tt(dnf);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("both hold at (1,2)"), std::string::npos);
  }
}

TEST(DnfToTtTest, RandomTreesMatchExhaustively) {
  Rng rng(52);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = testing::uniform_int(rng, 1, 6);
    const auto dims = testing::random_dims(rng, n, 3);
    const bool binary = trial % 2 == 0;
    const std::size_t outputs = testing::uniform_int(rng, 1, 3);
    const DecisionTree tree = testing::random_tree(rng, dims, outputs, binary, 5);
    const TensorTrain tt = tree_to_tt(tree);
    Instance x(n, 1);
    do {
      const auto want = evaluate_tree(tree, x);
      const DenseTensor got = tt_eval(tt, x);
      for (std::size_t j = 0; j < outputs; ++j) {
        if (binary) {
          EXPECT_EQ(got.values()[j], want[j]);
        } else {
          EXPECT_NEAR(got.values()[j], want[j], 1e-12);
        }
      }
    } while (next_point(x, dims));
  }
}

TEST(EnsembleTest, SingleTreeWeightOne) {
  const DecisionTree t = second_bit_tree();
  const std::vector<DecisionTree> trees{t};
  const std::vector<double> w{1.0};
  const std::size_t x[] = {2, 2};
  const TensorTrain dist = uniform_to_tt({2, 2});
  const ShapMatrix ens = ensemble_shap(trees, w, dist, x);
  const ShapMatrix one = shap_tt(tree_to_tt(t), dist, x);
  EXPECT_EQ(ens.values, one.values);
}

TEST(EnsembleTest, TwoHalfCopies) {
  const DecisionTree t = second_bit_tree();
  const std::vector<DecisionTree> trees{t, t};
  const std::vector<double> w{0.5, 0.5};
  const std::size_t x[] = {1, 2};
  const TensorTrain dist = uniform_to_tt({2, 2});
  const ShapMatrix ens = ensemble_shap(trees, w, dist, x);
  const ShapMatrix one = shap_tt(tree_to_tt(t), dist, x);
  EXPECT_LE(max_abs_diff(ens.values, one.values), 1e-15);
}

TEST(EnsembleTest, MatchesOracleOnSummedEvaluator) {
  Rng rng(53);
  const std::vector<std::size_t> dims = testing::random_dims(rng, 5, 3);
  std::vector<DecisionTree> trees;
  for (int k = 0; k < 3; ++k) trees.push_back(testing::random_tree(rng, dims, 1, false));
  const std::vector<double> w{0.5, -1.25, 2.0};
  const TensorTrain dist = testing::random_distribution(rng, dims, 3);
  const Instance x = testing::random_instance(rng, dims);
  const ModelEvaluator f = [&](std::span<const std::size_t> p) {
    return evaluate_ensemble(trees, w, p);
  };
  const ShapMatrix want = shap_dense_oracle(f, enumerate_distribution(dist), x);
  const ShapMatrix got = ensemble_shap(trees, w, dist, x);
  EXPECT_LE(testing::relative_error(got.values, want.values), 1e-9);
}

TEST(EnsembleTest, ErrorsNameTheTree) {
  DecisionTree bad = second_bit_tree();
  bad.nodes[1].feature = 1;
  const std::vector<DecisionTree> trees{second_bit_tree(), bad};
  const std::vector<double> w{1.0, 1.0};
  const std::size_t x[] = {1, 1};
  try {
    ensemble_shap(trees, w, uniform_to_tt({2, 2}), x);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(std::string(e.what()).find("tree 2"), std::string("validation error: ").size())
        << e.what();
  }
}

LinearRnn counter_rnn() {
  LinearRnn r;
  r.d = 1;
  r.alphabet = 2;
  r.h0 = {0.0};
  r.T = DenseTensor({1, 2, 1});
  r.W = DenseTensor({1, 2}, {2.0, 5.0});
  r.U = DenseTensor({1, 1}, {1.0});
  r.b = {0.0};
  r.O = DenseTensor({1, 1}, {1.0});
  return r;
}

TEST(RnnTest, HandUnrolledExample) {
  const LinearRnn r = counter_rnn();
  const Instance x{2, 1};
  EXPECT_EQ(rnn_rollout(r, x)[0], 7.0);
  EXPECT_EQ(eval1(rnn_to_tt(r, 2), x), 7.0);
}

TEST(RnnTest, ZeroParametersGiveZero) {
  LinearRnn r;
  r.d = 2;
  r.alphabet = 3;
  r.h0 = {0, 0};
  r.T = DenseTensor({2, 3, 2});
  r.W = DenseTensor({2, 3});
  r.U = DenseTensor({2, 2});
  r.b = {0, 0};
  r.O = DenseTensor({2, 1});
  const TensorTrain tt = rnn_to_tt(r, 3);
  const DenseTensor dense = tt_to_dense(tt);
  for (double v : dense.values()) EXPECT_EQ(v, 0.0);
}

TEST(RnnTest, RandomRolloutEquivalence) {
  Rng rng(54);
  for (int trial = 0; trial < 20; ++trial) {
    LinearRnn r;
    r.d = testing::uniform_int(rng, 1, 3);
    r.alphabet = testing::uniform_int(rng, 1, 3);
    const std::size_t outs = testing::uniform_int(rng, 1, 2);
    const std::size_t n = testing::uniform_int(rng, 1, 6);
    const auto h0 = testing::random_tensor(rng, {r.d});
    r.h0.assign(h0.values().begin(), h0.values().end());
    r.T = testing::random_tensor(rng, {r.d, r.alphabet, r.d});
    r.W = testing::random_tensor(rng, {r.d, r.alphabet});
    r.U = testing::random_tensor(rng, {r.d, r.d});
    const auto b = testing::random_tensor(rng, {r.d});
    r.b.assign(b.values().begin(), b.values().end());
    r.O = testing::random_tensor(rng, {r.d, outs});
    const TensorTrain tt = rnn_to_tt(r, n);
    const std::vector<std::size_t> dims(n, r.alphabet);
    Instance x(n, 1);
    do {
      const auto want = rnn_rollout(r, x);
      const DenseTensor got = tt_eval(tt, x);
      for (std::size_t j = 0; j < outs; ++j) {
        EXPECT_NEAR(got.values()[j], want[j], 1e-10 * std::max(1.0, std::abs(want[j])));
      }
    } while (next_point(x, dims));
  }
}

TEST(RnnTest, ShapeMismatchIsRejected) {
  LinearRnn r = counter_rnn();
  r.W = DenseTensor({1, 3});
  EXPECT_THROW(rnn_to_tt(r, 2), ValidationError);
  EXPECT_THROW(rnn_to_tt(counter_rnn(), 0), ValidationError);
}

TEST(LinearTest, ConstantBias) {
  const LinearModel m{{{0, 0}, {0, 0, 0}}, 3.0};
  const TensorTrain tt = linear_to_tt(m);
  EXPECT_EQ(tt.max_bond(), 2u);
  EXPECT_EQ(eval1(tt, {2, 3}), 3.0);
}

TEST(LinearTest, SumOfBits) {
  const LinearModel m{{{0, 1}, {0, 1}}, 0.0};
  EXPECT_EQ(eval1(linear_to_tt(m), {2, 2}), 2.0);
  EXPECT_EQ(evaluate_linear(m, Instance{2, 1}), 1.0);
}

TEST(LinearTest, ShapUnderIndependentDistribution) {
  Rng rng(55);
  const std::vector<std::size_t> dims{3, 2, 4};
  LinearModel m;
  std::vector<std::vector<double>> marginals;
  for (std::size_t d : dims) {
    std::vector<double> v(d), p(d);
    double total = 0;
    for (std::size_t k = 0; k < d; ++k) {
      v[k] = testing::uniform_real(rng, -2, 2);
      p[k] = testing::uniform_real(rng, 0.1, 1);
      total += p[k];
    }
    for (double& q : p) q /= total;
    m.values.push_back(v);
    marginals.push_back(p);
  }
  m.bias = 0.5;
  const TensorTrain dist = independent_to_tt(marginals);
  const Instance x{2, 1, 4};
  const ShapMatrix phi = shap_tt(linear_to_tt(m), dist, x);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    double mean = 0;
    for (std::size_t k = 0; k < dims[i]; ++k) mean += marginals[i][k] * m.values[i][k];
    EXPECT_NEAR(phi.at(i, 0), m.values[i][x[i] - 1] - mean, 1e-10);
  }
  const ModelEvaluator f = [&](std::span<const std::size_t> p) {
    return std::vector<double>{evaluate_linear(m, p)};
  };
  const ShapMatrix oracle = shap_dense_oracle(f, enumerate_distribution(dist), x);
  EXPECT_LE(max_abs_diff(phi.values, oracle.values), 1e-10);
}

}  // namespace
}  // namespace ttshap
