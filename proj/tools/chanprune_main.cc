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

// chanprune: search channel configurations under FLOPs/parameter pruning
// targets, run the integer toy benchmark, and query model costs.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.h"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const std::uint64_t lo = std::stoull(item.substr(0, dash));
      const std::uint64_t hi = std::stoull(item.substr(dash + 1));
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(std::stoull(item));
    }
  }
  return seeds;
}

void add_ide_options(CLI::App* cmd, chanprune::IdeConfig& c, std::string& mode) {
  cmd->add_option("--iters", c.iterations, "Generations T");
  cmd->add_option("--pop", c.population_size, "Population size N")->check(CLI::Range(4, 1 << 20));
  cmd->add_option("--f", c.differential_weight, "Differential weight F")->check(CLI::Range(0.0, 2.0));
  cmd->add_option("--cr", c.crossover_prob, "Crossover probability CR")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--stagnation", c.stagnation_limit, "Generations unchanged before reinitialization")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--force-mutant-gene", c.force_mutant_gene,
                "Always take at least one gene from the mutant");
  cmd->add_option("--mode", mode, "ide or de");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = chanprune::cli;
  CLI::App app{"Constrained integer differential-evolution search for channel pruning"};
  app.require_subcommand(1);

  cli::RunManifest manifest;
  std::string search_mode = "ide";
  std::uint64_t search_seed = 0;
  auto* search = app.add_subcommand("search", "Search for the best feasible structure");
  search->add_option("--arch", manifest.arch, "Architecture description file");
  search->add_option("--rf", manifest.target_flops_rate, "Target FLOPs pruning rate")
      ->check(CLI::Range(0.0, 1.0));
  search->add_option("--rp", manifest.target_params_rate, "Target parameter pruning rate")
      ->check(CLI::Range(0.0, 1.0));
  search->add_option("--evaluator", manifest.evaluator, "toy, surrogate or remote");
  search->add_option("--remote-cmd", manifest.remote_cmd,
                     "Command that starts an evaluator server on stdio");
  search->add_option("--remote-endpoint", manifest.remote_endpoint,
                     "host:port of a running evaluator server");
  search->add_option("--timeout", manifest.remote_timeout_s,
                     "Seconds to wait for each remote evaluation");
  search->add_option("--connect-retries", manifest.remote_retries,
                     "Extra TCP connection attempts");
  search->add_option("--steps", manifest.steps, "eighth, multiple:K or file:PATH");
  search->add_option("--seed", search_seed, "Random seed");
  search->add_option("--out", manifest.out_dir, "Output directory (default $CHANPRUNE_OUT)");
  add_ide_options(search, manifest.config, search_mode);

  cli::BenchmarkOptions bench;
  bench.config.iterations = 1000;
  std::string seed_text = "1-10";
  std::string bench_mode = "both";
  auto* benchmark = app.add_subcommand("benchmark", "Integer toy problem, IDE vs DE over seeds");
  benchmark->add_option("--seeds", seed_text, "Comma-separated seeds or ranges (a-b)");
  benchmark->add_option("--out", bench.out_dir, "Output directory (default $CHANPRUNE_OUT)");
  add_ide_options(benchmark, bench.config, bench_mode);
  bench_mode = "both";

  cli::CostOptions cost;
  auto* cost_cmd = app.add_subcommand("cost", "FLOPs, parameters and pruning rates of a structure");
  cost_cmd->add_option("--arch", cost.arch, "Architecture description file")->required();
  auto* inline_opt = cost_cmd->add_option("--structure", cost.structure, "c1,c2,...");
  auto* file_opt = cost_cmd->add_option("--structure-file", cost.structure_file,
                                        "File holding c1,c2,... on its first line");
  inline_opt->excludes(file_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (search->parsed()) {
      manifest.config.seed = search_seed;
      manifest.config.mode = chanprune::parse_search_mode(search_mode);
      return cli::cmd_search(manifest, std::cout, std::cerr);
    }
    if (benchmark->parsed()) {
      bench.seeds = parse_seeds(seed_text);
      bench.mode = bench_mode;
      return cli::cmd_benchmark(bench, std::cout, std::cerr);
    }
    return cli::cmd_cost(cost, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInvalidInput;
  }
}
