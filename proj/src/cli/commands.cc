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

#include "ttshap/cli/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "ttshap/distributions.h"
#include "ttshap/errors.h"
#include "ttshap/model_spec.h"
#include "ttshap/shap_engine.h"
#include "ttshap/value_router.h"

namespace ttshap::cli {
namespace {

constexpr double kFidelityTolerance = 1e-10;
constexpr double kAgreementTolerance = 1e-9;
constexpr std::size_t kSpotChecks = 10000;

ModelSpec load_model(const std::string& path) {
  if (path.empty()) throw ValidationError("--model is required");
  const Json j = load_json_file(path);
  return with_json_context(path, [&] { return model_spec_from_json(j); });
}

TensorTrain load_distribution(const std::string& path) {
  if (path.empty()) throw ValidationError("--dist is required");
  const Json j = load_json_file(path);
  const DistributionSpec spec =
      with_json_context(path, [&] { return distribution_spec_from_json(j); });
  return compile_distribution(spec);
}

Instance load_instance(const std::string& path) {
  if (path.empty()) throw ValidationError("--instance is required");
  const Json j = load_json_file(path);
  return with_json_context(path, [&] { return instance_from_json(j); });
}

void maybe_write(const std::string& path, const Json& j) {
  if (!path.empty()) write_text_file(path, j.dump(2) + "\n");
}

double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

double relative(double diff, double scale) { return diff / std::max(scale, 1e-300); }

struct Explained {
  ModelSpec spec;
  CompiledModel model;
  TensorTrain dist;
  Instance x;
  ShapMatrix phi;
  std::vector<double> fx;
  std::vector<double> ev;
  double residual = 0.0;
  double scale = 1.0;
};

Explained run_explain(const RunConfig& config) {
  Explained e;
  e.spec = load_model(config.model_path);
  e.model = compile_model(e.spec, config.bond_cap);
  e.dist = load_distribution(config.dist_path);
  e.x = load_instance(config.instance_path);
  e.phi = explain(e.model, e.dist, e.x, config.schedule, config.threads);
  e.fx = compiled_evaluator(e.model)(e.x);
  e.ev = compiled_expected_value(e.model, e.dist);
  e.scale = std::max({1.0, max_abs_of(e.fx), max_abs_of(e.ev)});
  for (std::size_t o = 0; o < e.phi.outputs(); ++o) {
    double sum = 0.0;
    for (std::size_t i = 0; i < e.phi.features(); ++i) sum += e.phi.at(i, o);
    e.residual = std::max(e.residual, std::abs(sum - (e.fx[o] - e.ev[o])));
  }
  return e;
}

// Trains with row-stochastic model slices and a chain-like distribution, so
// long products neither blow up nor vanish. The model's last bond stays open
// as its output leg.
std::pair<TensorTrain, TensorTrain> bench_trains(std::size_t n, std::size_t bond,
                                                 std::size_t alphabet, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<DenseTensor> model, dist;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t left = t == 0 ? 1 : bond;
    const std::size_t right_dist = t + 1 == n ? 1 : bond;
    DenseTensor m({left, alphabet, bond});
    for (std::size_t a = 0; a < left; ++a) {
      for (std::size_t s = 0; s < alphabet; ++s) {
        double sum = 0.0;
        for (std::size_t b = 0; b < bond; ++b) sum += (m.at({a, s, b}) = u(rng));
        for (std::size_t b = 0; b < bond; ++b) m.at({a, s, b}) /= sum;
      }
    }
    DenseTensor p({left, alphabet, right_dist});
    for (std::size_t a = 0; a < left; ++a) {
      double sum = 0.0;
      for (std::size_t s = 0; s < alphabet; ++s) {
        for (std::size_t b = 0; b < right_dist; ++b) sum += (p.at({a, s, b}) = u(rng));
      }
      for (std::size_t s = 0; s < alphabet; ++s) {
        for (std::size_t b = 0; b < right_dist; ++b) p.at({a, s, b}) /= sum;
      }
    }
    model.push_back(std::move(m));
    dist.push_back(std::move(p));
  }
  return {TensorTrain(std::move(model)), TensorTrain(std::move(dist))};
}

}  // namespace

void validate_config(const RunConfig& config) {
  if (config.threads == 0) throw ValidationError("--threads must be positive");
  if (config.dense_cap == 0) throw ValidationError("--dense-cap must be positive");
  if (config.bond_cap == 0) throw ValidationError("--bond-cap must be positive");
}

Json cmd_compile(const RunConfig& config) {
  validate_config(config);
  const ModelSpec spec = load_model(config.model_path);
  const CompiledModel model = compile_model(spec, config.bond_cap);
  const ModelEvaluator source = source_evaluator(spec);
  const ModelEvaluator compiled = compiled_evaluator(model);

  const auto dims = model.input_dims();
  const std::size_t domain = domain_size(dims);
  const bool exhaustive = domain <= config.dense_cap;
  double max_diff = 0.0, scale = 1.0;
  std::size_t points = 0;
  auto check = [&](std::span<const std::size_t> x) {
    const std::vector<double> a = source(x), b = compiled(x);
    if (a.size() != b.size()) throw ConsistencyError("compiled output arity differs");
    for (std::size_t o = 0; o < a.size(); ++o) {
      max_diff = std::max(max_diff, std::abs(a[o] - b[o]));
      scale = std::max(scale, std::abs(a[o]));
    }
    ++points;
  };
  Instance x(dims.size(), 1);
  if (exhaustive) {
    do check(x); while (next_point(x, dims));
  } else {
    std::mt19937_64 rng(config.seed);
    for (std::size_t k = 0; k < kSpotChecks; ++k) {
      for (std::size_t t = 0; t < dims.size(); ++t) x[t] = 1 + rng() % dims[t];
      check(x);
    }
  }
  const bool pass = max_diff <= kFidelityTolerance * scale;
  maybe_write(config.output_path, compiled_to_json(model));

  std::size_t max_bond = 0;
  for (const TensorTrain& tt : model.trains) max_bond = std::max(max_bond, tt.max_bond());
  return Json{{"command", "compile"},
              {"kind", spec.kind},
              {"trains", model.trains.size()},
              {"sites", model.inputs()},
              {"outputs", model.outputs()},
              {"max_bond", max_bond},
              {"fidelity",
               {{"mode", exhaustive ? "exhaustive" : "sampled"},
                {"points", points},
                {"max_abs_diff", max_diff},
                {"status", pass ? "pass" : "fail"}}},
              {"ok", pass}};
}

Json cmd_explain(const RunConfig& config) {
  validate_config(config);
  const Explained e = run_explain(config);
  const Json phi = shap_to_json(e.phi);
  maybe_write(config.output_path, phi);
  return Json{{"command", "explain"},
              {"schedule", std::string(schedule_name(config.schedule))},
              {"threads", config.threads},
              {"phi", phi},
              {"model_value", e.fx},
              {"expected_value", e.ev},
              {"efficiency_residual", e.residual},
              {"ok", e.residual <= kAgreementTolerance * e.scale}};
}

Json cmd_verify(const RunConfig& config) {
  validate_config(config);
  const Explained e = run_explain(config);
  const EnumerableDistribution support = enumerate_distribution(e.dist, config.dense_cap);
  const ShapMatrix oracle =
      shap_dense_oracle(source_evaluator(e.spec), support, e.x, config.dense_cap);
  const ScanSchedule other = config.schedule == ScanSchedule::kTree ? ScanSchedule::kSequential
                                                                    : ScanSchedule::kTree;
  const ShapMatrix alt = explain(e.model, e.dist, e.x, other, config.threads);

  const double scale = std::max(max_abs(oracle.values), e.scale);
  const double abs_diff = max_abs_diff(e.phi.values, oracle.values);
  const double rel_diff = relative(abs_diff, scale);
  const double schedule_rel = relative(max_abs_diff(e.phi.values, alt.values), scale);
  const bool pass = rel_diff <= kAgreementTolerance && schedule_rel <= kAgreementTolerance;
  const Json report{{"command", "verify"},
                    {"schedule", std::string(schedule_name(config.schedule))},
                    {"max_abs_diff", abs_diff},
                    {"max_rel_diff", rel_diff},
                    {"schedule_rel_diff", schedule_rel},
                    {"efficiency_residual", e.residual},
                    {"phi", shap_to_json(e.phi)},
                    {"oracle", shap_to_json(oracle)},
                    {"status", pass ? "pass" : "fail"},
                    {"ok", pass}};
  maybe_write(config.output_path, report);
  return report;
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.threads.empty() || config.schedules.empty()) {
    throw ValidationError("bench needs at least one schedule and thread count");
  }
  std::vector<BenchRow> rows;
  for (std::size_t n : config.lengths) {
    for (std::size_t bond : config.bonds) {
      if (n == 0 || bond == 0) throw ValidationError("bench lengths and bonds must be positive");
      std::mt19937_64 rng(config.seed ^ (n * 0x9E3779B97F4A7C15ULL) ^ bond);
      const auto [model, dist] = bench_trains(n, bond, config.alphabet, rng);

      std::vector<DenseTensor> transfers(n);
      for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t s = 1; s <= config.alphabet; ++s) {
          DenseTensor term = kron(dist.slice(t, s), model.slice(t, s));
          if (s == 1) {
            transfers[t] = std::move(term);
          } else {
            auto acc = transfers[t].mutable_values();
            for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += term.values()[k];
          }
        }
      }
      const DenseTensor reference = scan_product(transfers, ScanSchedule::kSequential);
      const double scale = max_abs(reference);

      bool shap_agree = true;
      const bool shap_checked = n <= config.shap_cap;
      if (shap_checked) {
        Instance x(n);
        for (auto& s : x) s = 1 + rng() % config.alphabet;
        const ShapMatrix a = shap_tt(model, dist, x, ScanSchedule::kSequential);
        const ShapMatrix b = shap_tt(model, dist, x, ScanSchedule::kTree);
        shap_agree = relative(max_abs_diff(a.values, b.values), max_abs(a.values)) <=
                     kAgreementTolerance;
      }

      for (ScanSchedule schedule : config.schedules) {
        DenseTensor first;
        for (std::size_t k = 0; k < config.threads.size(); ++k) {
          BenchRow row;
          row.length = n;
          row.bond = bond;
          row.schedule = schedule;
          row.threads = config.threads[k];
          ScanStats stats;
          const auto start = std::chrono::steady_clock::now();
          const DenseTensor result = scan_product(transfers, schedule, row.threads, &stats);
          const auto stop = std::chrono::steady_clock::now();
          row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
          // Level 0 assembles the site matrices; the tree then adds one level
          // per pairing round, the chain one per product.
          row.levels = schedule == ScanSchedule::kTree ? stats.levels + 1 : n;
          row.products = stats.products;
          row.rel_diff = relative(max_abs_diff(result, reference), scale);
          row.shap_checked = shap_checked;
          row.equal = row.rel_diff <= kAgreementTolerance && shap_agree;
          if (k == 0) {
            first = result;
          } else {
            row.bit_identical = result == first;
          }
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "length,bond,schedule,threads,levels,products,wall_ms,rel_diff,equal,bit_identical,"
        "shap_checked\n";
  os.precision(6);
  for (const BenchRow& r : rows) {
    os << r.length << ',' << r.bond << ',' << schedule_name(r.schedule) << ',' << r.threads << ','
       << r.levels << ',' << r.products << ',' << r.wall_ms << ',' << r.rel_diff << ','
       << (r.equal ? "true" : "false") << ',' << (r.bit_identical ? "true" : "false") << ','
       << (r.shap_checked ? "true" : "false") << '\n';
  }
  return os.str();
}

Json cmd_count(const std::string& cnf_path, const std::string& route, std::size_t bond_cap) {
  if (cnf_path.empty()) throw ValidationError("--cnf is required");
  const CnfFormula cnf = read_dimacs(cnf_path);
  Json report{{"command", "count"},
              {"variables", cnf.variables},
              {"clauses", cnf.clauses.size()},
              {"route", route}};
  bool ok = true;
  std::size_t count = 0;
  if (route == "both") {
    const std::size_t a = cnf_model_count(cnf, CountRoute::kViaBnn, bond_cap);
    const std::size_t b = cnf_model_count(cnf, CountRoute::kViaClauseLdfas, bond_cap);
    report["counts"] = {{"via_bnn", a}, {"via_clause_ldfas", b}};
    ok = a == b;
    count = a;
  } else {
    count = cnf_model_count(cnf, parse_count_route(route), bond_cap);
  }
  report["count"] = count;
  if (cnf.variables <= 20) {
    const std::size_t brute = brute_force_model_count(cnf);
    report["brute_force"] = brute;
    ok = ok && brute == count;
  }
  report["ok"] = ok;
  return report;
}

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kResource:
      return 3;
    case ErrorCategory::kConsistency:
      return 4;
    default:
      return 2;
  }
}

}  // namespace ttshap::cli
