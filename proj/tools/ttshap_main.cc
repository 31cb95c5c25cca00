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

// ttshap: compile models to tensor trains, explain and verify SHAP matrices,
// benchmark contraction schedules, count CNF models.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttshap/cli/commands.h"
#include "ttshap/errors.h"

namespace {

using ttshap::Json;
namespace cli = ttshap::cli;

struct Flags {
  cli::RunConfig run;
  std::string schedule = "tree";
  std::string cnf_path;
  std::string route = "via_bnn";
  std::vector<std::size_t> lengths{256, 1024, 4096};
  std::vector<std::size_t> bonds{8};
  std::vector<std::string> schedules{"sequential", "tree"};
  std::vector<std::size_t> bench_threads{1, 2, 8};
  std::size_t alphabet = 2;
  std::size_t shap_cap = 16;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--threads", f.run.threads, "Worker threads")
      ->envname("TTSHAP_THREADS")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.run.output_path, "Output file");
  cmd->add_option("--seed", f.run.seed, "Random seed");
}

void add_model_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--model", f.run.model_path, "Model spec (JSON)")->required();
  cmd->add_option("--dense-cap", f.run.dense_cap, "Largest dense materialization")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--bond-cap", f.run.bond_cap, "Largest compiled bond dimension")
      ->check(CLI::PositiveNumber);
}

void add_explain_flags(CLI::App* cmd, Flags& f) {
  add_model_flags(cmd, f);
  cmd->add_option("--dist", f.run.dist_path, "Distribution spec (JSON)")->required();
  cmd->add_option("--instance", f.run.instance_path, "Instance (JSON)")->required();
  cmd->add_option("--schedule", f.schedule, "sequential or tree")
      ->check(CLI::IsMember({"sequential", "tree"}));
}

int report(const Json& j) {
  std::cout << j.dump(2) << "\n";
  return j.value("ok", false) ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact SHAP for tensor-train models and distributions"};
  app.require_subcommand(1);
  Flags f;

  auto* compile = app.add_subcommand("compile", "Compile a model spec to a tensor train");
  add_model_flags(compile, f);
  add_common(compile, f);

  auto* explain = app.add_subcommand("explain", "Compute the SHAP matrix");
  add_explain_flags(explain, f);
  add_common(explain, f);

  auto* verify = app.add_subcommand("verify", "Compare the engine against brute force");
  add_explain_flags(verify, f);
  add_common(verify, f);

  auto* bench = app.add_subcommand("bench", "Time sequential and tree contraction");
  bench->add_option("--lengths", f.lengths, "Feature counts")->delimiter(',');
  bench->add_option("--bonds", f.bonds, "Bond dimensions")->delimiter(',');
  bench->add_option("--schedules", f.schedules, "Schedules")
      ->delimiter(',')
      ->check(CLI::IsMember({"sequential", "tree"}));
  bench->add_option("--thread-counts", f.bench_threads, "Thread counts to compare")
      ->delimiter(',');
  bench->add_option("--alphabet", f.alphabet, "Symbols per site")->check(CLI::PositiveNumber);
  bench->add_option("--shap-cap", f.shap_cap, "Also run full SHAP up to this length");
  bench->add_option("--out", f.run.output_path, "CSV output file");
  bench->add_option("--seed", f.run.seed, "Random seed");

  auto* count = app.add_subcommand("count", "Count models of a DIMACS CNF");
  count->add_option("--cnf", f.cnf_path, "DIMACS file")->required();
  count->add_option("--route", f.route, "via_bnn, via_clause_ldfas or both")
      ->check(CLI::IsMember({"via_bnn", "via_clause_ldfas", "both"}));
  count->add_option("--bond-cap", f.run.bond_cap, "Largest compiled bond dimension")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    f.run.schedule = ttshap::parse_schedule(f.schedule);
    if (*compile) return report(cli::cmd_compile(f.run));
    if (*explain) return report(cli::cmd_explain(f.run));
    if (*verify) return report(cli::cmd_verify(f.run));
    if (*count) return report(cli::cmd_count(f.cnf_path, f.route, f.run.bond_cap));
    if (*bench) {
      cli::BenchConfig config;
      config.lengths = f.lengths;
      config.bonds = f.bonds;
      config.schedules.clear();
      for (const auto& s : f.schedules) config.schedules.push_back(ttshap::parse_schedule(s));
      config.threads = f.bench_threads;
      config.alphabet = f.alphabet;
      config.shap_cap = f.shap_cap;
      config.seed = f.run.seed;
      const auto rows = cli::run_bench(config);
      const std::string csv = cli::bench_csv(rows);
      if (f.run.output_path.empty()) {
        std::cout << csv;
      } else {
        ttshap::write_text_file(f.run.output_path, csv);
      }
      for (const auto& r : rows) {
        if (!r.equal || !r.bit_identical) return 4;
      }
      return 0;
    }
  } catch (const ttshap::Error& e) {
    std::cerr << Json{{"error", e.what()}, {"exit_code", cli::exit_code_for(e.category())}}.dump()
              << "\n";
    return cli::exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return 4;
  }
  return 2;
}
