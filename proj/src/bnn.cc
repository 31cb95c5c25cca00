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

#include "ttshap/bnn.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>

#include "ttshap/distributions.h"
#include "ttshap/errors.h"
#include "ttshap/shap_engine.h"

namespace ttshap {

void validate_bnn(const Bnn& bnn) {
  if (bnn.inputs == 0) throw ValidationError("network has no inputs");
  if (bnn.layers.empty()) throw ValidationError("network has no layers");
  std::size_t fan_in = bnn.inputs;
  for (std::size_t l = 0; l < bnn.layers.size(); ++l) {
    const BnnLayer& layer = bnn.layers[l];
    const std::string where = "layer " + std::to_string(l + 1);
    if (layer.weights.empty()) throw ValidationError(where + " has no neurons");
    if (layer.weights.size() != layer.reified.size()) {
      throw ValidationError(where + " needs one threshold per neuron");
    }
    for (std::size_t j = 0; j < layer.weights.size(); ++j) {
      if (layer.weights[j].size() != fan_in) {
        throw ValidationError(where + " neuron " + std::to_string(j + 1) + " has fan-in " +
                              std::to_string(layer.weights[j].size()) + ", expected " +
                              std::to_string(fan_in));
      }
      for (int w : layer.weights[j]) {
        if (w < -1 || w > 1) throw ValidationError(where + " has a weight outside {-1,0,1}");
      }
      if (layer.reified[j] > fan_in + 1) {
        throw ValidationError(where + " neuron " + std::to_string(j + 1) + " threshold " +
                              std::to_string(layer.reified[j]) + " exceeds fan-in + 1");
      }
    }
    fan_in = layer.weights.size();
  }
}

std::vector<bool> layer_forward(const BnnLayer& layer, const std::vector<bool>& in) {
  std::vector<bool> out(layer.weights.size());
  for (std::size_t j = 0; j < layer.weights.size(); ++j) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const int w = layer.weights[j][i];
      if ((w == 1 && in[i]) || (w == -1 && !in[i])) ++count;
    }
    out[j] = count >= layer.reified[j];
  }
  return out;
}

std::vector<double> bnn_forward(const Bnn& bnn, std::span<const std::size_t> x) {
  if (x.size() != bnn.inputs) throw ShapeError("input length does not match the network");
  std::vector<bool> act(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != kFalseSymbol && x[i] != kTrueSymbol) {
      throw IndexError("symbol " + std::to_string(x[i]) + " at input " + std::to_string(i + 1) +
                       " is not binary");
    }
    act[i] = x[i] == kTrueSymbol;
  }
  for (const BnnLayer& layer : bnn.layers) act = layer_forward(layer, act);
  return {act.begin(), act.end()};
}

DenseTensor bnn_collapse_lookup(const Bnn& bnn) {
  validate_bnn(bnn);
  const std::size_t width = bnn.layers[0].weights.size();
  if (width > kMaxLookupWidth) {
    throw ResourceError("lookup table limited to first-layer width " +
                        std::to_string(kMaxLookupWidth) + ", got " + std::to_string(width));
  }
  const std::size_t patterns = std::size_t{1} << width;
  DenseTensor table({patterns, bnn.outputs()});
  std::vector<bool> act(width);
  for (std::size_t p = 0; p < patterns; ++p) {
    for (std::size_t j = 0; j < width; ++j) act[j] = (p >> (width - 1 - j)) & 1;
    std::vector<bool> y = act;
    for (std::size_t l = 1; l < bnn.layers.size(); ++l) y = layer_forward(bnn.layers[l], y);
    for (std::size_t o = 0; o < y.size(); ++o) table.at({p, o}) = y[o] ? 1.0 : 0.0;
  }
  return table;
}

std::size_t bnn_bond_bound(const Bnn& bnn) {
  const BnnLayer& first = bnn.layers.at(0);
  const std::size_t base =
      *std::max_element(first.reified.begin(), first.reified.end()) + 1;
  std::size_t bound = 1;
  for (std::size_t j = 0; j < first.reified.size(); ++j) {
    if (bound > std::numeric_limits<std::size_t>::max() / base) {
      return std::numeric_limits<std::size_t>::max();
    }
    bound *= base;
  }
  return bound;
}

TensorTrain bnn_to_tt(const Bnn& bnn, std::size_t bond_cap) {
  validate_bnn(bnn);
  const BnnLayer& first = bnn.layers[0];
  const std::size_t width = first.weights.size();
  const std::size_t bound = bnn_bond_bound(bnn);
  if (bound > bond_cap) {
    throw ResourceError("bond bound (R_max+1)^W_1 = " + std::to_string(bound) +
                        " exceeds the cap " + std::to_string(bond_cap));
  }
  const DenseTensor lookup = bnn_collapse_lookup(bnn);

  std::vector<Ldfa> neurons;
  for (std::size_t j = 0; j < width; ++j) {
    neurons.push_back(neuron_to_ldfa(first.weights[j], first.reified[j]));
  }
  const Ldfa product = ldfa_product(neurons);
  TensorTrain open = ldfa_to_tt(product, true);

  // Final product state -> first-layer activation pattern.
  const std::size_t finals = product.state_counts.back();
  const std::size_t patterns = std::size_t{1} << width;
  DenseTensor to_pattern({finals, patterns});
  for (std::size_t s = 0; s < finals; ++s) {
    std::size_t rest = s, pattern = 0;
    for (std::size_t j = width; j-- > 0;) {
      const std::size_t states = first.reified[j] + 1;
      const std::size_t counter = rest % states;
      rest /= states;
      if (counter == first.reified[j]) pattern |= std::size_t{1} << (width - 1 - j);
    }
    to_pattern.at({s, pattern}) = 1.0;
  }
  const DenseTensor readout = matmul(to_pattern, lookup);
  std::vector<DenseTensor> cores = open.cores();
  cores.back() = contract(cores.back(), readout, {{3, 1}});
  return TensorTrain(std::move(cores));
}

Bnn cnf_to_bnn(const CnfFormula& cnf) {
  validate_cnf(cnf);
  Bnn bnn;
  bnn.inputs = cnf.variables;
  BnnLayer hidden;
  for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
    const CnfClause& clause = cnf.clauses[c];
    if (clause.size() > 3) {
      throw ValidationError("clause " + std::to_string(c + 1) + " has " +
                            std::to_string(clause.size()) + " literals, at most 3 allowed");
    }
    std::vector<int> w(cnf.variables, 0);
    bool tautology = false;
    for (int lit : clause) {
      const std::size_t v = static_cast<std::size_t>(std::abs(lit)) - 1;
      const int sign = lit > 0 ? 1 : -1;
      if (w[v] == -sign) tautology = true;
      w[v] = sign;
    }
    if (tautology) {
      hidden.weights.emplace_back(cnf.variables, 0);
      hidden.reified.push_back(0);
    } else {
      hidden.weights.push_back(std::move(w));
      hidden.reified.push_back(1);
    }
  }
  const std::size_t m = hidden.weights.size();
  BnnLayer output;
  output.weights.emplace_back(m, 1);
  output.reified.push_back(m);
  bnn.layers.push_back(std::move(hidden));
  bnn.layers.push_back(std::move(output));
  return bnn;
}

CountRoute parse_count_route(std::string_view name) {
  if (name == "via_bnn") return CountRoute::kViaBnn;
  if (name == "via_clause_ldfas") return CountRoute::kViaClauseLdfas;
  throw ValidationError("unknown count route '" + std::string(name) +
                        "', expected via_bnn or via_clause_ldfas");
}

std::size_t cnf_model_count(const CnfFormula& cnf, CountRoute route, std::size_t bond_cap) {
  validate_cnf(cnf);
  TensorTrain compiled;
  if (route == CountRoute::kViaBnn) {
    compiled = bnn_to_tt(cnf_to_bnn(cnf), bond_cap);
  } else {
    if (cnf.clauses.size() >= 63 || (std::size_t{1} << cnf.clauses.size()) > bond_cap) {
      throw ResourceError("clause product needs 2^" + std::to_string(cnf.clauses.size()) +
                          " states, cap is " + std::to_string(bond_cap));
    }
    std::vector<Ldfa> clauses;
    for (const CnfClause& c : cnf.clauses) clauses.push_back(clause_to_ldfa(c, cnf.variables));
    compiled = ldfa_to_tt(ldfa_product(clauses));
  }
  const TensorTrain uniform = uniform_to_tt(std::vector<std::size_t>(cnf.variables, 2));
  const double expectation = expected_value(compiled, uniform).at(0);
  const double count = std::ldexp(expectation, static_cast<int>(cnf.variables));
  const double rounded = std::round(count);
  if (!(std::abs(count - rounded) <= 1e-6) || rounded < 0.0) {
    throw ConsistencyError("model count " + std::to_string(count) + " is not an integer");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace ttshap
