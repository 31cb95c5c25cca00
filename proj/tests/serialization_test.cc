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

#include "ttshap/serialization.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "test_support.h"
#include "ttshap/bnn.h"
#include "ttshap/distributions.h"
#include "ttshap/errors.h"

namespace ttshap {
namespace {

using testing::Rng;

std::string data(const std::string& name) { return std::string(TTSHAP_TEST_DATA) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ttshap_" + name)).string();
}

TEST(TensorJsonTest, RoundTripIsBitExact) {
  Rng rng(81);
  const DenseTensor t = testing::random_tensor(rng, {2, 3, 4}, -1e3, 1e3);
  const Json j = Json::parse(tensor_to_json(t).dump());
  EXPECT_EQ(tensor_from_json(j), t);
}

TEST(TensorJsonTest, NestedArraysAndScalars) {
  const DenseTensor t = tensor_from_json(Json::parse("[[1, 2, 3], [4, 5, 6]]"));
  EXPECT_EQ(t.shape(), Shape({2, 3}));
  EXPECT_EQ(t.at({1, 0}), 4.0);
  EXPECT_EQ(tensor_from_json(Json(2.5)).values()[0], 2.5);
  EXPECT_THROW(tensor_from_json(Json::parse("[[1, 2], [3]]")), ValidationError);
  EXPECT_THROW(tensor_from_json(Json("x")), ValidationError);
}

TEST(TrainJsonTest, RoundTripIsBitExact) {
  Rng rng(82);
  const TensorTrain tt = testing::random_train(rng, {2, 3, 2, 4}, 3, 2);
  const TensorTrain back = train_from_json(Json::parse(train_to_json(tt).dump()));
  ASSERT_EQ(back.length(), tt.length());
  for (std::size_t t = 0; t < tt.length(); ++t) EXPECT_EQ(back.core(t), tt.core(t));
}

TEST(TrainJsonTest, MalformedCoresAreRejected) {
  EXPECT_THROW(train_from_json(Json::parse(R"({"cores": [[[1, 2]]]})")), ShapeError);
  EXPECT_THROW(train_from_json(Json::parse(R"({"cores": []})")), ValidationError);
}

TEST(ShapJsonTest, RoundTripKeepsNames) {
  ShapMatrix phi;
  phi.values = DenseTensor({2, 2}, {0.1, -0.2, 1.0 / 3, 7.0});
  phi.feature_names = {"a", "b"};
  phi.output_names = {"p", "q"};
  const ShapMatrix back = shap_from_json(Json::parse(shap_to_json(phi).dump()));
  EXPECT_EQ(back.values, phi.values);
  EXPECT_EQ(back.feature_names, phi.feature_names);
  EXPECT_EQ(back.output_names, phi.output_names);
}

TEST(ShapJsonTest, DefaultNames) {
  ShapMatrix phi;
  phi.values = DenseTensor({2, 1}, {0.0, 0.5});
  const Json j = shap_to_json(phi);
  EXPECT_EQ(j.at("features"), Json::parse(R"(["x1", "x2"])"));
  EXPECT_EQ(j.at("outputs"), Json::parse(R"(["y1"])"));
  EXPECT_EQ(j.at("phi"), Json::parse("[[0.0], [0.5]]"));
}

TEST(DistributionJsonTest, AllKinds) {
  const auto uniform = compile_distribution(distribution_spec_from_json(load_json_file(data("uniform2.json"))));
  EXPECT_EQ(uniform.physical_dims(), (std::vector<std::size_t>{2, 2}));

  const auto indep = compile_distribution(distribution_spec_from_json(
      Json::parse(R"({"kind": "independent", "marginals": [[0.3, 0.7], [0.5, 0.5]]})")));
  EXPECT_NEAR(tt_eval(indep, Instance{2, 1}).values()[0], 0.35, 1e-16);

  const auto emp = compile_distribution(distribution_spec_from_json(
      Json::parse(R"({"kind": "empirical", "rows": [[1, 2], [2, 2]], "dims": [2, 3]})")));
  EXPECT_EQ(emp.physical_dims(), (std::vector<std::size_t>{2, 3}));
  EXPECT_NEAR(tt_eval(emp, Instance{2, 2}).values()[0], 0.5, 1e-16);

  const auto markov = compile_distribution(distribution_spec_from_json(Json::parse(
      R"({"kind": "markov", "initial": [1, 0], "transitions": [[[0, 1], [1, 0]]], "length": 3})")));
  EXPECT_NEAR(tt_eval(markov, Instance{1, 2, 1}).values()[0], 1.0, 1e-16);

  const Json tt_json = train_to_json(uniform_to_tt({3}));
  const auto raw = compile_distribution(distribution_spec_from_json(tt_json));
  EXPECT_NEAR(tt_eval(raw, Instance{3}).values()[0], 1.0 / 3, 1e-16);
  const auto wrapped =
      compile_distribution(distribution_spec_from_json(Json{{"kind", "tt"}, {"tt", tt_json}}));
  EXPECT_EQ(wrapped.core(0), raw.core(0));
}

TEST(DistributionJsonTest, BadInputIsValidationError) {
  EXPECT_THROW(distribution_spec_from_json(Json::parse(R"({"kind": "beta"})")), ValidationError);
  EXPECT_THROW(with_json_context("dist", [] {
                 return distribution_spec_from_json(Json::parse(R"({"kind": "uniform"})"));
               }),
               ValidationError);
}

TEST(ModelJsonTest, TreeFromFile) {
  const ModelSpec spec = model_spec_from_json(load_json_file(data("second_bit_tree.json")));
  EXPECT_EQ(spec.kind, "tree");
  EXPECT_EQ(spec.tree.nodes.size(), 7u);
  EXPECT_EQ(spec.tree.nodes[0].edges[1].values, (std::vector<std::size_t>{2}));
  const CompiledModel m = compile_model(spec);
  EXPECT_EQ(m.trains[0].max_bond(), 2u);
}

TEST(ModelJsonTest, ClassLabelsBecomeOneHot) {
  const ModelSpec spec = model_spec_from_json(Json::parse(R"({
    "kind": "tree", "dims": [2], "classes": 3,
    "nodes": [{"feature": 1, "edges": [{"symbols": [1], "child": 1}, {"symbols": [2], "child": 2}]},
              {"label": 3}, {"label": 1}]})"));
  EXPECT_EQ(spec.tree.nodes[1].value, (std::vector<double>{0, 0, 1}));
  EXPECT_THROW(model_spec_from_json(Json::parse(
                   R"({"kind": "tree", "dims": [2], "classes": 2, "nodes": [{"label": 4}]})")),
               ValidationError);
}

TEST(ModelJsonTest, LinearRnnWithFlatParameters) {
  const ModelSpec spec = model_spec_from_json(Json::parse(R"({
    "kind": "linear_rnn", "h0": [0], "W": [2, 5], "T": [0, 0], "U": [1], "b": [0],
    "O": [1], "window": 2})"));
  EXPECT_EQ(spec.rnn.alphabet, 2u);
  EXPECT_EQ(spec.rnn.W.shape(), Shape({1, 2}));
  const CompiledModel m = compile_model(spec);
  EXPECT_EQ(tt_eval(m.trains[0], Instance{2, 1}).values()[0], 7.0);
}

TEST(ModelJsonTest, LinearAndBnn) {
  const ModelSpec lin = model_spec_from_json(load_json_file(data("single_feature_linear.json")));
  EXPECT_EQ(lin.kind, "linear");
  const ModelSpec bnn = model_spec_from_json(load_json_file(data("wide_bnn.json")));
  EXPECT_EQ(bnn.kind, "bnn");
  EXPECT_EQ(bnn_bond_bound(bnn.bnn), 4096u);
  EXPECT_THROW(model_spec_from_json(Json::parse(
                   R"({"kind": "bnn", "layers": [{"weights": [[1]], "reified": [1]}], "outputs": 2})")),
               ValidationError);
}

TEST(ModelJsonTest, CompiledRoundTrip) {
  Rng rng(83);
  CompiledModel single{{testing::random_train(rng, {2, 3}, 2, 1)}, {1.0}};
  const Json js = compiled_to_json(single);
  EXPECT_TRUE(js.contains("cores"));
  const ModelSpec back = model_spec_from_json(Json::parse(js.dump()));
  EXPECT_EQ(back.kind, "tt");
  EXPECT_EQ(back.trains.trains[0].core(1), single.trains[0].core(1));

  CompiledModel sum{{testing::random_train(rng, {2, 3}, 2, 1), testing::random_train(rng, {2, 3}, 2, 1)},
                    {0.25, 0.75}};
  const ModelSpec back2 = model_spec_from_json(Json::parse(compiled_to_json(sum).dump()));
  EXPECT_EQ(back2.kind, "tt");
  EXPECT_EQ(back2.trains.weights, sum.weights);
  EXPECT_EQ(back2.trains.trains[1].core(0), sum.trains[1].core(0));
}

TEST(InstanceJsonTest, OneAndZeroBased) {
  EXPECT_EQ(instance_from_json(Json::parse(R"({"x": [1, 2]})")), (Instance{1, 2}));
  EXPECT_EQ(instance_from_json(Json::parse(R"({"values": [0, 1]})")), (Instance{1, 2}));
  EXPECT_EQ(instance_from_json(load_json_file(data("instance_11.json"))), (Instance{2, 2}));
  EXPECT_THROW(instance_from_json(Json::parse(R"({"y": [1]})")), ValidationError);
}

TEST(LoadJsonTest, ReportsLineOfSyntaxError) {
  const std::string path = temp_path("broken.json");
  write_text_file(path, "{\n  \"a\": 1,\n  \"b\": ]\n}\n");
  try {
    load_json_file(path);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(path + ":3:"), std::string::npos) << e.what();
  }
  std::remove(path.c_str());
  EXPECT_THROW(load_json_file(temp_path("missing.json")), ValidationError);
}

}  // namespace
}  // namespace ttshap
