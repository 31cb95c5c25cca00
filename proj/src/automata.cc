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

#include "ttshap/automata.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "ttshap/errors.h"

namespace ttshap {

void validate_ldfa(const Ldfa& a) {
  if (a.alphabet == 0) throw ValidationError("automaton alphabet is empty");
  if (a.transitions.empty()) throw ValidationError("automaton has no layers");
  if (a.state_counts.size() != a.transitions.size() + 1) {
    throw ValidationError("automaton needs one state count per layer plus the initial layer");
  }
  if (a.state_counts[0] != 1) throw ValidationError("initial layer must hold one state");
  for (std::size_t l = 0; l < a.transitions.size(); ++l) {
    if (a.state_counts[l + 1] == 0) {
      throw ValidationError("layer " + std::to_string(l + 1) + " has no states");
    }
    if (a.transitions[l].size() != a.state_counts[l] * a.alphabet) {
      throw ValidationError("layer " + std::to_string(l + 1) + " transition table size mismatch");
    }
    for (int target : a.transitions[l]) {
      if (target < -1 || target >= static_cast<int>(a.state_counts[l + 1])) {
        throw ValidationError("layer " + std::to_string(l + 1) + " targets a missing state");
      }
    }
  }
  if (a.accepting.size() != a.state_counts.back()) {
    throw ValidationError("accepting mask must cover the final layer");
  }
}

std::optional<std::size_t> ldfa_run(const Ldfa& a, std::span<const std::size_t> x) {
  if (x.size() != a.layers()) {
    throw ShapeError("input has " + std::to_string(x.size()) + " symbols, automaton has " +
                     std::to_string(a.layers()) + " layers");
  }
  std::size_t state = 0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (x[l] < 1 || x[l] > a.alphabet) {
      throw IndexError("symbol " + std::to_string(x[l]) + " at layer " + std::to_string(l + 1) +
                       " outside the alphabet");
    }
    const int target = a.next(l, state, x[l]);
    if (target < 0) return std::nullopt;
    state = static_cast<std::size_t>(target);
  }
  return state;
}

bool ldfa_accepts(const Ldfa& a, std::span<const std::size_t> x) {
  const auto final_state = ldfa_run(a, x);
  return final_state && a.accepting[*final_state];
}

void validate_cnf(const CnfFormula& cnf) {
  if (cnf.variables == 0) throw ValidationError("formula has no variables");
  if (cnf.clauses.empty()) throw ValidationError("formula has no clauses");
  for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
    if (cnf.clauses[c].empty()) {
      throw ValidationError("clause " + std::to_string(c + 1) + " is empty");
    }
    for (int lit : cnf.clauses[c]) {
      const std::size_t v = static_cast<std::size_t>(std::abs(lit));
      if (lit == 0 || v > cnf.variables) {
        throw ValidationError("clause " + std::to_string(c + 1) + " has literal " +
                              std::to_string(lit) + " outside [1," +
                              std::to_string(cnf.variables) + "]");
      }
    }
  }
}

namespace {

bool literal_holds(int lit, std::size_t symbol) {
  return (lit > 0) == (symbol == kTrueSymbol);
}

}  // namespace

bool evaluate_cnf(const CnfFormula& cnf, std::span<const std::size_t> x) {
  if (x.size() != cnf.variables) throw ShapeError("assignment length does not match formula");
  for (const CnfClause& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) {
      if (literal_holds(lit, x[static_cast<std::size_t>(std::abs(lit)) - 1])) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::size_t brute_force_model_count(const CnfFormula& cnf) {
  validate_cnf(cnf);
  if (cnf.variables > 30) throw ResourceError("brute-force count limited to 30 variables");
  std::size_t count = 0;
  std::vector<std::size_t> x(cnf.variables);
  for (std::size_t bits = 0; bits < (std::size_t{1} << cnf.variables); ++bits) {
    for (std::size_t v = 0; v < cnf.variables; ++v) {
      x[v] = (bits >> v) & 1 ? kTrueSymbol : kFalseSymbol;
    }
    if (evaluate_cnf(cnf, x)) ++count;
  }
  return count;
}

CnfFormula parse_dimacs(const std::string& text) {
  CnfFormula cnf;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  CnfClause current;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == 'c') continue;
    if (first == "%") break;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (first == "p") {
      std::string fmt;
      long long vars = -1, clauses = -1;
      if (have_header || !(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars <= 0 ||
          clauses < 0) {
        throw ValidationError(where + "malformed problem line");
      }
      have_header = true;
      cnf.variables = static_cast<std::size_t>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      continue;
    }
    if (!have_header) throw ValidationError(where + "clause before the problem line");
    ls.clear();
    ls.str(line);
    long long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        if (current.empty()) throw ValidationError(where + "empty clause");
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (static_cast<std::size_t>(std::llabs(lit)) > cnf.variables) {
          throw ValidationError(where + "literal " + std::to_string(lit) + " out of range");
        }
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!ls.eof()) throw ValidationError(where + "unexpected token");
  }
  if (!have_header) throw ValidationError("missing problem line");
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (cnf.clauses.size() != declared_clauses) {
    throw ValidationError("problem line declares " + std::to_string(declared_clauses) +
                          " clauses, found " + std::to_string(cnf.clauses.size()));
  }
  validate_cnf(cnf);
  return cnf;
}

CnfFormula read_dimacs(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ValidationError("cannot open " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  try {
    return parse_dimacs(buffer.str());
  } catch (const Error& e) {
    rethrow_with_context(e, path);
  }
}

Ldfa clause_to_ldfa(const CnfClause& clause, std::size_t variables) {
  if (variables == 0) throw ValidationError("clause automaton needs a variable");
  if (clause.empty()) throw ValidationError("clause is empty");
  // satisfies[v][symbol-1]: does reading this symbol at variable v satisfy a literal.
  std::vector<std::array<bool, 2>> satisfies(variables, {false, false});
  for (int lit : clause) {
    const std::size_t v = static_cast<std::size_t>(std::abs(lit));
    if (lit == 0 || v > variables) {
      throw ValidationError("literal " + std::to_string(lit) + " outside [1," +
                            std::to_string(variables) + "]");
    }
    satisfies[v - 1][(lit > 0 ? kTrueSymbol : kFalseSymbol) - 1] = true;
  }
  Ldfa a;
  a.alphabet = 2;
  a.state_counts.assign(variables + 1, 2);
  a.state_counts[0] = 1;
  for (std::size_t l = 0; l < variables; ++l) {
    std::vector<int> table(a.state_counts[l] * 2);
    for (std::size_t s = 0; s < a.state_counts[l]; ++s) {
      for (std::size_t sym = 0; sym < 2; ++sym) {
        table[s * 2 + sym] = (s == 1 || satisfies[l][sym]) ? 1 : 0;
      }
    }
    a.transitions.push_back(std::move(table));
  }
  a.accepting = {false, true};
  return a;
}

Ldfa neuron_to_ldfa(std::span<const int> weights, std::size_t threshold) {
  const std::size_t n = weights.size();
  if (n == 0) throw ValidationError("neuron has no inputs");
  if (threshold > n + 1) {
    throw ValidationError("threshold " + std::to_string(threshold) + " exceeds fan-in + 1 = " +
                          std::to_string(n + 1));
  }
  for (int w : weights) {
    if (w < -1 || w > 1) throw ValidationError("neuron weights must be -1, 0 or +1");
  }
  const std::size_t states = threshold + 1;
  Ldfa a;
  a.alphabet = 2;
  a.state_counts.assign(n + 1, states);
  a.state_counts[0] = 1;
  for (std::size_t l = 0; l < n; ++l) {
    std::vector<int> table(a.state_counts[l] * 2);
    for (std::size_t r = 0; r < a.state_counts[l]; ++r) {
      for (std::size_t sym = 1; sym <= 2; ++sym) {
        const bool lit = (weights[l] == 1 && sym == kTrueSymbol) ||
                         (weights[l] == -1 && sym == kFalseSymbol);
        const std::size_t next = std::min(threshold, r + (lit ? 1 : 0));
        table[r * 2 + (sym - 1)] = static_cast<int>(next);
      }
    }
    a.transitions.push_back(std::move(table));
  }
  a.accepting.assign(states, false);
  a.accepting[threshold] = true;
  return a;
}

Ldfa ldfa_product(std::span<const Ldfa> automata) {
  if (automata.empty()) throw ValidationError("product of no automata");
  for (const Ldfa& a : automata) validate_ldfa(a);
  const Ldfa& head = automata[0];
  for (std::size_t k = 1; k < automata.size(); ++k) {
    if (automata[k].alphabet != head.alphabet || automata[k].layers() != head.layers()) {
      throw ValidationError("automaton " + std::to_string(k + 1) +
                            " differs in alphabet or layer count");
    }
  }
  const std::size_t L = head.layers();
  const std::size_t sigma = head.alphabet;
  Ldfa out;
  out.alphabet = sigma;
  out.state_counts.assign(L + 1, 1);
  for (std::size_t l = 0; l <= L; ++l) {
    for (const Ldfa& a : automata) out.state_counts[l] *= a.state_counts[l];
  }
  std::vector<std::size_t> parts(automata.size());
  for (std::size_t l = 0; l < L; ++l) {
    std::vector<int> table(out.state_counts[l] * sigma, -1);
    for (std::size_t s = 0; s < out.state_counts[l]; ++s) {
      std::size_t rest = s;
      for (std::size_t k = automata.size(); k-- > 0;) {
        parts[k] = rest % automata[k].state_counts[l];
        rest /= automata[k].state_counts[l];
      }
      for (std::size_t sym = 1; sym <= sigma; ++sym) {
        std::size_t target = 0;
        bool defined = true;
        for (std::size_t k = 0; k < automata.size() && defined; ++k) {
          const int t = automata[k].next(l, parts[k], sym);
          defined = t >= 0;
          target = target * automata[k].state_counts[l + 1] + static_cast<std::size_t>(t);
        }
        if (defined) table[s * sigma + (sym - 1)] = static_cast<int>(target);
      }
    }
    out.transitions.push_back(std::move(table));
  }
  out.accepting.assign(out.state_counts[L], true);
  for (std::size_t s = 0; s < out.state_counts[L]; ++s) {
    std::size_t rest = s;
    for (std::size_t k = automata.size(); k-- > 0;) {
      const std::size_t part = rest % automata[k].state_counts[L];
      rest /= automata[k].state_counts[L];
      if (!automata[k].accepting[part]) out.accepting[s] = false;
    }
  }
  return out;
}

TensorTrain ldfa_to_tt(const Ldfa& a, bool open_final) {
  validate_ldfa(a);
  const std::size_t L = a.layers();
  std::vector<DenseTensor> cores;
  for (std::size_t l = 0; l < L; ++l) {
    DenseTensor core({a.state_counts[l], a.alphabet, a.state_counts[l + 1]});
    for (std::size_t s = 0; s < a.state_counts[l]; ++s) {
      for (std::size_t sym = 1; sym <= a.alphabet; ++sym) {
        const int t = a.next(l, s, sym);
        if (t >= 0) core.at({s, sym - 1, static_cast<std::size_t>(t)}) = 1.0;
      }
    }
    cores.push_back(std::move(core));
  }
  if (!open_final) {
    DenseTensor accept({a.state_counts[L], 1});
    for (std::size_t s = 0; s < a.state_counts[L]; ++s) {
      accept.at({s, 0}) = a.accepting[s] ? 1.0 : 0.0;
    }
    cores.back() = contract(cores.back(), accept, {{3, 1}});
  }
  return TensorTrain(std::move(cores));
}

TensorTrain copy_tensor_tt(std::size_t order, std::size_t dim) {
  if (order == 0 || dim == 0) throw ValidationError("copy tensor needs order and dimension >= 1");
  std::vector<DenseTensor> cores;
  if (order == 1) {
    cores.emplace_back(Shape{1, dim, 1}, std::vector<double>(dim, 1.0));
    return TensorTrain(std::move(cores));
  }
  for (std::size_t k = 0; k < order; ++k) {
    const std::size_t left = k == 0 ? 1 : dim;
    const std::size_t right = k + 1 == order ? 1 : dim;
    DenseTensor core({left, dim, right});
    for (std::size_t v = 0; v < dim; ++v) {
      core.at({k == 0 ? 0 : v, v, k + 1 == order ? 0 : v}) = 1.0;
    }
    cores.push_back(std::move(core));
  }
  return TensorTrain(std::move(cores));
}

}  // namespace ttshap
