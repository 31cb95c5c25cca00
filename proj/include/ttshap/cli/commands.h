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

#ifndef TTSHAP_CLI_COMMANDS_H_
#define TTSHAP_CLI_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ttshap/bnn.h"
#include "ttshap/serialization.h"
#include "ttshap/tensor_train.h"

namespace ttshap::cli {

struct RunConfig {
  std::string model_path;
  std::string dist_path;
  std::string instance_path;
  ScanSchedule schedule = ScanSchedule::kTree;
  std::size_t threads = 1;
  std::size_t dense_cap = kDefaultDenseCap;
  std::size_t bond_cap = kDefaultBondCap;
  std::string output_path;
  std::uint64_t seed = 0;
};

void validate_config(const RunConfig& config);

// Each command returns a JSON report whose "ok" field decides the exit code.
Json cmd_compile(const RunConfig& config);
Json cmd_explain(const RunConfig& config);
Json cmd_verify(const RunConfig& config);

struct BenchConfig {
  std::vector<std::size_t> lengths{64};
  std::vector<std::size_t> bonds{4};
  std::vector<ScanSchedule> schedules{ScanSchedule::kSequential, ScanSchedule::kTree};
  std::vector<std::size_t> threads{1};
  std::size_t alphabet = 2;
  // Full SHAP runs are added for lengths up to this value.
  std::size_t shap_cap = 16;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::size_t length = 0;
  std::size_t bond = 0;
  ScanSchedule schedule = ScanSchedule::kSequential;
  std::size_t threads = 1;
  std::size_t levels = 0;
  std::size_t products = 0;
  double wall_ms = 0.0;
  double rel_diff = 0.0;  // against the sequential product
  bool equal = false;
  bool bit_identical = true;  // against the first thread count, same schedule
  bool shap_checked = false;
};

std::vector<BenchRow> run_bench(const BenchConfig& config);
std::string bench_csv(const std::vector<BenchRow>& rows);

Json cmd_count(const std::string& cnf_path, const std::string& route, std::size_t bond_cap);

// Exit status for a library error category.
int exit_code_for(ErrorCategory category);

}  // namespace ttshap::cli

#endif  // TTSHAP_CLI_COMMANDS_H_
