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

#ifndef TTSHAP_SERIALIZATION_H_
#define TTSHAP_SERIALIZATION_H_

#include <string>

#include "json.hpp"
#include "ttshap/errors.h"
#include "ttshap/dense_tensor.h"
#include "ttshap/distributions.h"
#include "ttshap/model_spec.h"
#include "ttshap/shap_engine.h"
#include "ttshap/tensor_train.h"

namespace ttshap {

using Json = nlohmann::json;

// Reads and parses a JSON file. Syntax errors carry the file name and line.
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// {"shape": [...], "values": [...]}. tensor_from_json also accepts nested
// arrays and infers the shape from the nesting.
Json tensor_to_json(const DenseTensor& t);
DenseTensor tensor_from_json(const Json& j);

// {"cores": [tensor, ...]}
Json train_to_json(const TensorTrain& tt);
TensorTrain train_from_json(const Json& j);

// {"features": [...], "outputs": [...], "phi": [[...], ...]}
Json shap_to_json(const ShapMatrix& phi);
ShapMatrix shap_from_json(const Json& j);

DistributionSpec distribution_spec_from_json(const Json& j);
ModelSpec model_spec_from_json(const Json& j);

// A single train serializes as plain train JSON; a weighted sum as
// {"kind": "ensemble", "weights": [...], "tts": [train, ...]}.
Json compiled_to_json(const CompiledModel& model);

// {"x": [1-based symbols]} or {"values": [0-based values]}.
Instance instance_from_json(const Json& j);

// Wraps JSON type and key errors from `fn` as validation errors prefixed with
// `context`.
template <typename Fn>
auto with_json_context(const std::string& context, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(context + ": " + e.what());
  }
}

}  // namespace ttshap

#endif  // TTSHAP_SERIALIZATION_H_
