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

#include "ttshap/value_router.h"

#include <gtest/gtest.h>

#include "test_support.h"
#include "ttshap/distributions.h"
#include "ttshap/errors.h"
#include "ttshap/shap_engine.h"

namespace ttshap {
namespace {

using testing::Rng;

TEST(RouterTest, SingleSymbolAlwaysRouted) {
  const RouterTensor r = router_tensor(1);
  EXPECT_EQ(r.tensor.shape(), Shape({1, 2, 1, 1}));
  EXPECT_DOUBLE_EQ(r.tensor.at({0, 0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(r.tensor.at({0, 1, 0, 0}), 1.0);
}

TEST(RouterTest, KeepSliceCopiesTheInstance) {
  const RouterTensor r = router_tensor(2);
  for (std::size_t vx = 0; vx < 2; ++vx) {
    for (std::size_t vp = 0; vp < 2; ++vp) {
      for (std::size_t out = 0; out < 2; ++out) {
        EXPECT_DOUBLE_EQ(r.tensor.at({vx, 1, vp, out}), out == vx ? 1.0 : 0.0);
      }
    }
  }
}

TEST(RouterTest, DropSliceRoutesTheSample) {
  const DenseTensor r = router_tensor(2).tensor;
  DenseTensor y = contract(one_hot(1, 2), r, {{1, 1}});
  y = contract(one_hot(1, 2), y, {{1, 1}});
  y = contract(one_hot(2, 2), y, {{1, 1}});
  EXPECT_EQ(y, DenseTensor::vector({0, 1}));
}

TEST(RouterTest, CountsAndStochasticSlices) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const DenseTensor r = router_tensor(n).tensor;
    double ones = 0.0;
    for (double v : r.values()) ones += v;
    EXPECT_DOUBLE_EQ(ones, 2.0 * n * n);
    for (std::size_t vx = 0; vx < n; ++vx) {
      for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t vp = 0; vp < n; ++vp) {
          double row = 0.0;
          for (std::size_t out = 0; out < n; ++out) row += r.at({vx, s, vp, out});
          EXPECT_DOUBLE_EQ(row, 1.0);
        }
      }
    }
  }
}

// f(x1, x2) = [x2 = 2]
ModelEvaluator second_bit() {
  return [](std::span<const std::size_t> x) {
    return std::vector<double>{x[1] == 2 ? 1.0 : 0.0};
  };
}

TEST(MarginalValueTest, FullCoalitionIsTheModel) {
  const auto dist = enumerate_distribution(uniform_to_tt({2, 2}));
  const std::size_t x[] = {1, 2};
  const std::size_t s[] = {2, 2};
  EXPECT_DOUBLE_EQ(marginal_value(second_bit(), dist, x, s)[0], 1.0);
}

TEST(MarginalValueTest, EmptyCoalitionIsTheMean) {
  const auto dist = enumerate_distribution(uniform_to_tt({2, 2}));
  const std::size_t x[] = {1, 2};
  const std::size_t s[] = {1, 1};
  EXPECT_DOUBLE_EQ(marginal_value(second_bit(), dist, x, s)[0], 0.5);
}

TEST(MarginalValueTest, ProductWithOneFeatureKept) {
  const auto dist = enumerate_distribution(uniform_to_tt({2, 2}));
  const ModelEvaluator f = [](std::span<const std::size_t> x) {
    return std::vector<double>{double((x[0] - 1) * (x[1] - 1))};
  };
  const std::size_t x[] = {2, 2};
  const std::size_t s[] = {2, 1};
  EXPECT_DOUBLE_EQ(marginal_value(f, dist, x, s)[0], 0.5);
}

TEST(MarginalValueTest, EnumerationCap) {
  EXPECT_THROW(enumerate_distribution(uniform_to_tt(std::vector<std::size_t>(21, 2))),
               ResourceError);
}

TEST(MarginalValueTest, RouterContractionMatchesDirectValue) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = testing::uniform_int(rng, 1, 4);
    const auto dims = testing::random_dims(rng, n, 3);
    const TensorTrain model = testing::random_train(rng, dims, 2, 2);
    const TensorTrain dist = testing::random_distribution(rng, dims, 2);
    const DenseTensor value =
        marginal_value_tensor(testing::model_tensor(model), testing::distribution_tensor(dist));
    const auto support = enumerate_distribution(dist);
    const auto f = tt_evaluator(model);
    const Instance x = testing::random_instance(rng, dims);
    std::vector<std::size_t> s(n);
    for (auto& e : s) e = testing::uniform_int(rng, 1, 2);
    const auto want = marginal_value(f, support, x, s);
    std::vector<std::size_t> index{0};
    for (std::size_t t = 0; t < n; ++t) {
      index.push_back(x[t] - 1);
      index.push_back(s[t] - 1);
    }
    for (std::size_t o = 0; o < 2; ++o) {
      index[0] = o;
      EXPECT_NEAR(value.at(index), want[o], 1e-12);
    }
  }
}

TEST(DomainTest, NextPointIsRowMajor) {
  const std::vector<std::size_t> dims{2, 3};
  Instance x{1, 1};
  std::vector<Instance> seen{x};
  while (next_point(x, dims)) seen.push_back(x);
  ASSERT_EQ(seen.size(), 6u);
  EXPECT_EQ(seen[1], Instance({1, 2}));
  EXPECT_EQ(seen[3], Instance({2, 1}));
  EXPECT_EQ(domain_size(dims), 6u);
}

}  // namespace
}  // namespace ttshap
