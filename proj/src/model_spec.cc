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

#include "ttshap/model_spec.h"

#include <string>
#include <utility>

#include "ttshap/errors.h"

namespace ttshap {
namespace {

void check_compatible(const CompiledModel& model) {
  if (model.trains.empty() || model.trains.size() != model.weights.size()) {
    throw ValidationError("compiled model needs one weight per train");
  }
  const auto dims = model.trains[0].physical_dims();
  for (std::size_t k = 1; k < model.trains.size(); ++k) {
    if (model.trains[k].physical_dims() != dims ||
        model.trains[k].right_boundary() != model.trains[0].right_boundary()) {
      throw ShapeError("train " + std::to_string(k + 1) + " does not match the first train");
    }
  }
}

}  // namespace

CompiledModel compile_model(const ModelSpec& spec, std::size_t bond_cap) {
  CompiledModel out;
  if (spec.kind == "tree") {
    out.trains.push_back(tree_to_tt(spec.tree));
  } else if (spec.kind == "ensemble") {
    const auto& e = spec.ensemble;
    if (e.trees.empty() || e.trees.size() != e.weights.size()) {
      throw ValidationError("ensemble needs one weight per tree");
    }
    for (std::size_t k = 0; k < e.trees.size(); ++k) {
      try {
        out.trains.push_back(tree_to_tt(e.trees[k]));
      } catch (const Error& err) {
        rethrow_with_context(err, "tree " + std::to_string(k + 1));
      }
    }
    out.weights = e.weights;
    check_compatible(out);
    return out;
  } else if (spec.kind == "linear_rnn") {
    out.trains.push_back(rnn_to_tt(spec.rnn, spec.window));
  } else if (spec.kind == "linear") {
    out.trains.push_back(linear_to_tt(spec.linear));
  } else if (spec.kind == "bnn") {
    out.trains.push_back(bnn_to_tt(spec.bnn, bond_cap));
  } else if (spec.kind == "tt") {
    for (const TensorTrain& tt : spec.trains.trains) {
      if (tt.length() == 0) throw ValidationError("model train is empty");
      if (tt.left_boundary() != 1) throw ShapeError("model train must have left boundary 1");
    }
    check_compatible(spec.trains);
    return spec.trains;
  } else {
    throw ValidationError("unknown model kind '" + spec.kind + "'");
  }
  out.weights = {1.0};
  return out;
}

ModelEvaluator source_evaluator(const ModelSpec& spec) {
  if (spec.kind == "tree") {
    validate_tree(spec.tree);
    return [tree = spec.tree](std::span<const std::size_t> x) { return evaluate_tree(tree, x); };
  }
  if (spec.kind == "ensemble") {
    return [e = spec.ensemble](std::span<const std::size_t> x) {
      return evaluate_ensemble(e.trees, e.weights, x);
    };
  }
  if (spec.kind == "linear_rnn") {
    validate_rnn(spec.rnn);
    return [rnn = spec.rnn](std::span<const std::size_t> x) { return rnn_rollout(rnn, x); };
  }
  if (spec.kind == "linear") {
    return [m = spec.linear](std::span<const std::size_t> x) {
      return std::vector<double>{evaluate_linear(m, x)};
    };
  }
  if (spec.kind == "bnn") {
    validate_bnn(spec.bnn);
    return [b = spec.bnn](std::span<const std::size_t> x) { return bnn_forward(b, x); };
  }
  if (spec.kind == "tt") return compiled_evaluator(spec.trains);
  throw ValidationError("unknown model kind '" + spec.kind + "'");
}

ModelEvaluator compiled_evaluator(const CompiledModel& model) {
  check_compatible(model);
  return [model](std::span<const std::size_t> x) {
    std::vector<double> total(model.outputs(), 0.0);
    for (std::size_t k = 0; k < model.trains.size(); ++k) {
      const DenseTensor y = tt_eval(model.trains[k], x);
      for (std::size_t o = 0; o < total.size(); ++o) total[o] += model.weights[k] * y.values()[o];
    }
    return total;
  };
}

ShapMatrix explain(const CompiledModel& model, const TensorTrain& dist,
                   std::span<const std::size_t> x, ScanSchedule schedule, std::size_t threads) {
  check_compatible(model);
  ShapMatrix total;
  for (std::size_t k = 0; k < model.trains.size(); ++k) {
    const ShapMatrix part = shap_tt(model.trains[k], dist, x, schedule, threads);
    if (k == 0) total.values = DenseTensor(part.values.shape());
    auto dst = total.values.mutable_values();
    for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += model.weights[k] * part.values.values()[e];
  }
  return total;
}

std::vector<double> compiled_expected_value(const CompiledModel& model,
                                            const TensorTrain& dist) {
  check_compatible(model);
  std::vector<double> total(model.outputs(), 0.0);
  for (std::size_t k = 0; k < model.trains.size(); ++k) {
    const std::vector<double> e = expected_value(model.trains[k], dist);
    for (std::size_t o = 0; o < total.size(); ++o) total[o] += model.weights[k] * e[o];
  }
  return total;
}

}  // namespace ttshap
