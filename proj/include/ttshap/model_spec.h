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

#ifndef TTSHAP_MODEL_SPEC_H_
#define TTSHAP_MODEL_SPEC_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ttshap/bnn.h"
#include "ttshap/model_compilers.h"
#include "ttshap/shap_engine.h"
#include "ttshap/tensor_train.h"
#include "ttshap/value_router.h"

namespace ttshap {

struct TreeEnsemble {
  std::vector<DecisionTree> trees;
  std::vector<double> weights;
};

// Weighted sum of trains. Everything except an ensemble compiles to a single
// train with weight 1; ensembles stay a list and are explained by linearity.
struct CompiledModel {
  std::vector<TensorTrain> trains;
  std::vector<double> weights;

  std::size_t inputs() const { return trains.at(0).length(); }
  std::size_t outputs() const { return trains.at(0).right_boundary(); }
  std::vector<std::size_t> input_dims() const { return trains.at(0).physical_dims(); }
};

// Declarative model; `kind` selects which member is meaningful.
struct ModelSpec {
  std::string kind;  // tree | ensemble | linear_rnn | linear | bnn | tt
  DecisionTree tree;
  TreeEnsemble ensemble;
  LinearRnn rnn;
  std::size_t window = 0;
  LinearModel linear;
  Bnn bnn;
  CompiledModel trains;  // kind tt: one train, or a weighted sum of trains
};

CompiledModel compile_model(const ModelSpec& spec, std::size_t bond_cap = kDefaultBondCap);

// Evaluator of the source model, independent of any compiled train.
ModelEvaluator source_evaluator(const ModelSpec& spec);
ModelEvaluator compiled_evaluator(const CompiledModel& model);

ShapMatrix explain(const CompiledModel& model, const TensorTrain& dist,
                   std::span<const std::size_t> x, ScanSchedule schedule = ScanSchedule::kTree,
                   std::size_t threads = 1);

std::vector<double> compiled_expected_value(const CompiledModel& model,
                                            const TensorTrain& dist);

}  // namespace ttshap

#endif  // TTSHAP_MODEL_SPEC_H_
