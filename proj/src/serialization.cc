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

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ttshap/errors.h"

namespace ttshap {
namespace {

void infer_shape(const Json& j, std::size_t depth, Shape& shape) {
  if (!j.is_array()) return;
  if (j.empty()) throw ValidationError("nested tensor arrays must be nonempty");
  if (depth == shape.size()) shape.push_back(j.size());
  infer_shape(j[0], depth + 1, shape);
}

void flatten_nested(const Json& j, std::size_t depth, const Shape& shape,
                    std::vector<double>& out) {
  if (depth == shape.size()) {
    if (!j.is_number()) throw ValidationError("nested tensor is not rectangular");
    out.push_back(j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != shape[depth]) {
    throw ValidationError("nested tensor is not rectangular");
  }
  for (const Json& e : j) flatten_nested(e, depth + 1, shape, out);
}

std::vector<std::size_t> symbols_from(const Json& j, const char* one_based,
                                      const char* zero_based) {
  if (j.contains(one_based)) return j.at(one_based).get<std::vector<std::size_t>>();
  if (j.contains(zero_based)) {
    auto v = j.at(zero_based).get<std::vector<std::size_t>>();
    for (auto& e : v) ++e;
    return v;
  }
  throw ValidationError(std::string("expected key '") + one_based + "' or '" + zero_based + "'");
}

DecisionTree tree_from_json(const Json& j) {
  DecisionTree tree;
  tree.dims = j.at("dims").get<std::vector<std::size_t>>();
  const std::size_t classes = j.value("classes", std::size_t{0});
  tree.outputs = classes > 0 ? classes : j.value("outputs", std::size_t{1});
  tree.root = j.value("root", std::size_t{0});
  for (const Json& jn : j.at("nodes")) {
    TreeNode node;
    if (jn.contains("feature")) {
      node.feature = jn.at("feature").get<std::size_t>();
      if (node.feature == 0) throw ValidationError("tree features are numbered from 1");
      for (const Json& je : jn.at("edges")) {
        node.edges.push_back({symbols_from(je, "symbols", "values"),
                              je.at("child").get<std::size_t>()});
      }
    } else if (jn.contains("label")) {
      const std::size_t label = jn.at("label").get<std::size_t>();
      if (classes == 0 || label < 1 || label > classes) {
        throw ValidationError("leaf label " + std::to_string(label) + " outside [1," +
                              std::to_string(classes) + "]");
      }
      node.value.assign(classes, 0.0);
      node.value[label - 1] = 1.0;
    } else {
      const Json& v = jn.at("value");
      node.value = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

// Flat or lower-order input with the right number of entries is read in
// row-major order.
DenseTensor with_shape(DenseTensor t, const Shape& shape) {
  if (t.shape() == shape || t.size() != shape_product(shape)) return t;
  return DenseTensor(shape, {t.values().begin(), t.values().end()});
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ValidationError("cannot open " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  const std::string text = buffer.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ValidationError(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw ValidationError("cannot write " + path);
  file << text;
  if (!file) throw ValidationError("failed writing " + path);
}

Json tensor_to_json(const DenseTensor& t) {
  return Json{{"shape", t.shape()},
              {"values", std::vector<double>(t.values().begin(), t.values().end())}};
}

DenseTensor tensor_from_json(const Json& j) {
  if (j.is_object()) {
    return DenseTensor(j.at("shape").get<Shape>(), j.at("values").get<std::vector<double>>());
  }
  if (j.is_number()) return DenseTensor::scalar(j.get<double>());
  if (!j.is_array()) throw ValidationError("tensor must be an object, a number or an array");
  Shape shape;
  infer_shape(j, 0, shape);
  std::vector<double> values;
  flatten_nested(j, 0, shape, values);
  return DenseTensor(std::move(shape), std::move(values));
}

Json train_to_json(const TensorTrain& tt) {
  Json cores = Json::array();
  for (const DenseTensor& c : tt.cores()) cores.push_back(tensor_to_json(c));
  return Json{{"cores", std::move(cores)}};
}

TensorTrain train_from_json(const Json& j) {
  std::vector<DenseTensor> cores;
  for (const Json& c : j.at("cores")) cores.push_back(tensor_from_json(c));
  if (cores.empty()) throw ValidationError("train has no cores");
  return TensorTrain(std::move(cores));
}

Json shap_to_json(const ShapMatrix& phi) {
  std::vector<std::string> features = phi.feature_names;
  std::vector<std::string> outputs = phi.output_names;
  if (features.empty()) {
    for (std::size_t i = 1; i <= phi.features(); ++i) features.push_back("x" + std::to_string(i));
  }
  if (outputs.empty()) {
    for (std::size_t o = 1; o <= phi.outputs(); ++o) outputs.push_back("y" + std::to_string(o));
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < phi.features(); ++i) {
    std::vector<double> row(phi.outputs());
    for (std::size_t o = 0; o < row.size(); ++o) row[o] = phi.at(i, o);
    rows.push_back(row);
  }
  return Json{{"features", features}, {"outputs", outputs}, {"phi", rows}};
}

ShapMatrix shap_from_json(const Json& j) {
  const auto rows = j.at("phi").get<std::vector<std::vector<double>>>();
  if (rows.empty() || rows[0].empty()) throw ValidationError("phi must be a nonempty matrix");
  ShapMatrix out;
  out.values = DenseTensor::matrix(rows);
  out.feature_names = j.value("features", std::vector<std::string>{});
  out.output_names = j.value("outputs", std::vector<std::string>{});
  return out;
}

DistributionSpec distribution_spec_from_json(const Json& j) {
  DistributionSpec spec;
  if (!j.contains("kind") && j.contains("cores")) {
    spec.kind = "tt";
    spec.tt = train_from_json(j);
    return spec;
  }
  spec.kind = j.at("kind").get<std::string>();
  if (spec.kind == "uniform") {
    spec.dims = j.at("dims").get<std::vector<std::size_t>>();
  } else if (spec.kind == "independent") {
    spec.marginals = j.at("marginals").get<std::vector<std::vector<double>>>();
  } else if (spec.kind == "empirical") {
    for (const Json& row : j.at("rows")) spec.rows.push_back(row.get<Instance>());
    if (j.contains("dims")) {
      spec.dims = j.at("dims").get<std::vector<std::size_t>>();
    } else if (!spec.rows.empty()) {
      spec.dims.assign(spec.rows[0].size(), 1);
      for (const Instance& row : spec.rows) {
        for (std::size_t t = 0; t < std::min(row.size(), spec.dims.size()); ++t) {
          spec.dims[t] = std::max(spec.dims[t], row[t]);
        }
      }
    }
  } else if (spec.kind == "markov") {
    spec.initial = j.at("initial").get<std::vector<double>>();
    spec.transitions = j.at("transitions").get<std::vector<Matrix>>();
    if (j.contains("length")) {
      spec.length = j.at("length").get<std::size_t>();
    } else if (spec.transitions.size() > 1) {
      spec.length = spec.transitions.size() + 1;
    } else {
      throw ValidationError("markov distribution with one transition needs a length");
    }
  } else if (spec.kind == "tt") {
    spec.tt = train_from_json(j.contains("tt") ? j.at("tt") : j);
  } else {
    throw ValidationError("unknown distribution kind '" + spec.kind + "'");
  }
  return spec;
}

ModelSpec model_spec_from_json(const Json& j) {
  ModelSpec spec;
  if (!j.contains("kind") && j.contains("cores")) {
    spec.kind = "tt";
    spec.trains = {{train_from_json(j)}, {1.0}};
    return spec;
  }
  spec.kind = j.at("kind").get<std::string>();
  if (spec.kind == "tree") {
    spec.tree = tree_from_json(j);
  } else if (spec.kind == "ensemble") {
    const auto weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("tts")) {
      spec.kind = "tt";
      for (const Json& t : j.at("tts")) spec.trains.trains.push_back(train_from_json(t));
      spec.trains.weights = weights;
    } else {
      for (const Json& t : j.at("trees")) spec.ensemble.trees.push_back(tree_from_json(t));
      spec.ensemble.weights = weights;
    }
  } else if (spec.kind == "linear_rnn") {
    LinearRnn& r = spec.rnn;
    r.h0 = j.at("h0").get<std::vector<double>>();
    r.d = j.value("d", r.h0.size());
    const std::size_t d = std::max<std::size_t>(r.d, 1);
    r.W = tensor_from_json(j.at("W"));
    r.alphabet = j.value("alphabet", r.W.size() / d);
    const std::size_t a = r.alphabet;
    r.W = with_shape(std::move(r.W), {r.d, a});
    r.T = with_shape(tensor_from_json(j.at("T")), {r.d, a, r.d});
    r.U = with_shape(tensor_from_json(j.at("U")), {r.d, r.d});
    r.b = j.at("b").get<std::vector<double>>();
    DenseTensor o = tensor_from_json(j.at("O"));
    const std::size_t outputs = o.size() / d;
    r.O = with_shape(std::move(o), {r.d, outputs});
    spec.window = j.at("window").get<std::size_t>();
  } else if (spec.kind == "linear") {
    spec.linear.values = j.at("weights").get<std::vector<std::vector<double>>>();
    spec.linear.bias = j.value("bias", 0.0);
  } else if (spec.kind == "bnn") {
    for (const Json& jl : j.at("layers")) {
      spec.bnn.layers.push_back({jl.at("weights").get<std::vector<std::vector<int>>>(),
                                 jl.at("reified").get<std::vector<std::size_t>>()});
    }
    std::size_t inferred = 0;
    if (!spec.bnn.layers.empty() && !spec.bnn.layers[0].weights.empty()) {
      inferred = spec.bnn.layers[0].weights[0].size();
    }
    spec.bnn.inputs = j.value("inputs", inferred);
    validate_bnn(spec.bnn);
    if (j.contains("outputs") && j.at("outputs").get<std::size_t>() != spec.bnn.outputs()) {
      throw ValidationError("declared outputs do not match the last layer width " +
                            std::to_string(spec.bnn.outputs()));
    }
  } else if (spec.kind == "tt") {
    spec.trains = {{train_from_json(j.contains("tt") ? j.at("tt") : j)}, {1.0}};
  } else {
    throw ValidationError("unknown model kind '" + spec.kind + "'");
  }
  return spec;
}

Json compiled_to_json(const CompiledModel& model) {
  if (model.trains.size() == 1 && model.weights.at(0) == 1.0) {
    return train_to_json(model.trains[0]);
  }
  Json tts = Json::array();
  for (const TensorTrain& tt : model.trains) tts.push_back(train_to_json(tt));
  return Json{{"kind", "ensemble"}, {"weights", model.weights}, {"tts", std::move(tts)}};
}

Instance instance_from_json(const Json& j) {
  if (j.is_array()) return j.get<Instance>();
  return symbols_from(j, "x", "values");
}

}  // namespace ttshap
