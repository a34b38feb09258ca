// Copyright 2026 The Chanprune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHANPRUNE_TOOLS_COMMANDS_H_
#define CHANPRUNE_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "chanprune/ide_engine.h"

namespace chanprune::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kInvalidInput = 2;
inline constexpr int kUnattainable = 3;
inline constexpr int kEvaluatorFailed = 4;

struct RunManifest {
  std::filesystem::path arch;
  // "eighth", "multiple:K" or "file:PATH".
  std::string steps = "eighth";
  double target_flops_rate = 0.0;
  double target_params_rate = 0.0;
  // "toy", "surrogate" or "remote".
  std::string evaluator = "surrogate";
  std::string remote_cmd;
  std::string remote_endpoint;
  double remote_timeout_s = 300.0;
  int remote_retries = 0;
  IdeConfig config;
  std::filesystem::path out_dir;
};

struct BenchmarkOptions {
  std::vector<std::uint64_t> seeds;
  // "ide", "de" or "both".
  std::string mode = "both";
  IdeConfig config;
  std::filesystem::path out_dir;
};

struct CostOptions {
  std::filesystem::path arch;
  std::string structure;
  std::filesystem::path structure_file;
};

// Each command reports results on `out` and one-line diagnostics on `err`,
// and returns an exit status.
int cmd_search(const RunManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_benchmark(const BenchmarkOptions& options, std::ostream& out, std::ostream& err);
int cmd_cost(const CostOptions& options, std::ostream& out, std::ostream& err);

// $CHANPRUNE_OUT, else "chanprune-out".
std::filesystem::path default_output_dir();

}  // namespace chanprune::cli

#endif  // CHANPRUNE_TOOLS_COMMANDS_H_
