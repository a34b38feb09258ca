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

#include "commands.h"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "chanprune/arch_model.h"
#include "chanprune/benchmark.h"
#include "chanprune/error.h"
#include "chanprune/fitness.h"
#include "chanprune/history.h"
#include "chanprune/remote.h"
#include "chanprune/search_space.h"
#include "json.hpp"

namespace chanprune::cli {

namespace {

using ojson = nlohmann::ordered_json;

StepVector resolve_steps(const std::string& rule, const StructureVector& base) {
  if (rule == "eighth") return eighth_steps(base);
  if (rule.rfind("multiple:", 0) == 0) {
    const std::string k = rule.substr(9);
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != k.size()) {
      throw ValidationError("bad step rule '" + rule + "'");
    }
    return multiple_steps(base, value);
  }
  if (rule.rfind("file:", 0) == 0) return load_step_file(rule.substr(5), base);
  throw ValidationError("unknown step rule '" + rule + "' (eighth, multiple:K, file:PATH)");
}

void print_cost(std::ostream& out, const ArchitectureSpec& spec, const StructureVector& s) {
  const CostReport cost = compute_cost(spec, s);
  const PruningRates rates = pruning_rates(spec, s);
  out << "flops: " << cost.flops << "\n";
  out << "params: " << cost.params << "\n";
  out << "flops_rate: " << format_double(rates.flops_rate) << "\n";
  out << "params_rate: " << format_double(rates.params_rate) << "\n";
}

ojson config_json(const IdeConfig& c) {
  return ojson{{"mode", std::string(to_string(c.mode))},
               {"population_size", c.population_size},
               {"iterations", c.iterations},
               {"differential_weight", c.differential_weight},
               {"crossover_prob", c.crossover_prob},
               {"stagnation_limit", c.stagnation_limit},
               {"seed", c.seed},
               {"force_mutant_gene", c.force_mutant_gene}};
}

ojson descriptor_json(const EvaluatorDescriptor& d) {
  return ojson{{"name", d.name},
               {"deterministic", d.deterministic},
               {"concurrent_safe", d.concurrent_safe},
               {"expected_vector_length", d.expected_vector_length},
               {"value_range", ojson::array({d.value_lo, d.value_hi})}};
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const MinimumReached& e) {
    err << "error: MinimumReached: " << e.what() << "\n";
    return kUnattainable;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const EvaluatorError& e) {
    err << "error: evaluator: " << e.what() << "\n";
    return kEvaluatorFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ValidationError("cannot create output directory " + dir.string());
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write " + path.string());
  return f;
}

}  // namespace

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("CHANPRUNE_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return "chanprune-out";
}

int cmd_search(const RunManifest& m, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    m.config.validate();
    const std::filesystem::path dir = m.out_dir.empty() ? default_output_dir() : m.out_dir;

    std::shared_ptr<const ArchitectureSpec> arch;
    CompressedSpace space;
    std::shared_ptr<Evaluator> evaluator;
    std::optional<SparsityTargets> targets;
    std::string step_text;

    if (m.evaluator == "toy") {
      space = toy_space();
      evaluator = std::make_shared<ToyEvaluator>();
    } else {
      if (m.arch.empty()) throw ValidationError("--arch is required for this evaluator");
      arch = std::make_shared<const ArchitectureSpec>(load_arch_spec(m.arch));
      targets = SparsityTargets(m.target_flops_rate, m.target_params_rate);
      const StepVector steps = resolve_steps(m.steps, arch->base_structure());
      step_text = StructureVector(steps.steps).to_string();
      space = build_space(arch, steps, *targets);
      if (m.evaluator == "surrogate") {
        evaluator = std::make_shared<SurrogateEvaluator>(arch);
      } else if (m.evaluator == "remote") {
        RemoteOptions opts;
        opts.timeout = std::chrono::milliseconds(
            static_cast<std::int64_t>(m.remote_timeout_s * 1000.0));
        opts.expected_vector_length = static_cast<std::int64_t>(space.dimension());
        opts.connect_retries = m.remote_retries;
        if (!m.remote_cmd.empty() == !m.remote_endpoint.empty()) {
          throw ValidationError("remote evaluator needs exactly one of --remote-cmd or "
                                "--remote-endpoint");
        }
        if (!m.remote_cmd.empty()) {
          evaluator = spawn_remote(m.remote_cmd, opts);
        } else {
          evaluator = connect_remote(parse_endpoint(m.remote_endpoint), opts);
        }
      } else {
        throw ValidationError("unknown evaluator '" + m.evaluator +
                              "' (toy, surrogate, remote)");
      }
    }

    std::shared_ptr<CachedEvaluator> cache;
    if (evaluator->descriptor().deterministic) {
      cache = std::make_shared<CachedEvaluator>(evaluator);
    }
    Evaluator& eval = cache ? static_cast<Evaluator&>(*cache) : *evaluator;

    ensure_dir(dir);
    std::ofstream history = open_out(dir / "history.csv");
    RunMetadata meta{m.config, space_size(space).str(), evaluator->descriptor(),
                     arch ? arch->name() : "toy", targets};
    write_history_header(history, meta);
    history.flush();

    SearchResult result = run(space, eval, m.config, [&](const HistoryRecord& rec) {
      write_history_row(history, rec);
      history.flush();
    });
    history.close();

    const StructureVector& best = result.best.vector;
    const double fitness = result.best.fitness->value();
    {
      std::ofstream f = open_out(dir / "best_structure.txt");
      f << best.to_string() << "\n";
    }
    {
      std::ofstream f = open_out(dir / "final_population.csv");
      f << "index,fitness,stagnation,vector\n";
      for (std::size_t n = 0; n < result.final_population.individuals.size(); ++n) {
        const Individual& ind = result.final_population.individuals[n];
        f << n << ',' << format_double(ind.fitness->value()) << ',' << ind.stagnation << ','
          << ind.vector.to_string(';') << "\n";
      }
    }

    ojson run_doc{{"arch", meta.arch_name},
                  {"arch_file", m.arch.string()},
                  {"steps", step_text},
                  {"config", config_json(m.config)},
                  {"evaluator", descriptor_json(evaluator->descriptor())},
                  {"space_size", meta.space_size}};
    if (targets) {
      run_doc["targets"] = ojson{{"flops_rate", targets->flops_rate},
                                 {"params_rate", targets->params_rate}};
    }
    ojson best_doc{{"structure", best.vec()}, {"fitness", fitness}};
    if (arch) {
      const CostReport cost = compute_cost(*arch, best);
      const PruningRates rates = pruning_rates(*arch, best);
      best_doc["flops"] = cost.flops;
      best_doc["params"] = cost.params;
      best_doc["flops_rate"] = rates.flops_rate;
      best_doc["params_rate"] = rates.params_rate;
    }
    run_doc["best"] = best_doc;
    if (cache) {
      run_doc["evaluations"] = ojson{{"requests", cache->requests()},
                                     {"inner", cache->inner_evaluations()}};
    }
    {
      std::ofstream f = open_out(dir / "run.json");
      f << run_doc.dump(2) << "\n";
    }

    out << "best structure: " << best.to_string() << "\n";
    out << "fitness: " << format_double(fitness) << "\n";
    if (arch) print_cost(out, *arch, best);
    out << "output: " << dir.string() << "\n";

    if (!space.feasible(best)) {
      err << "error: best structure violates the sparsity targets\n";
      return kFailure;
    }
    return kOk;
  });
}

int cmd_benchmark(const BenchmarkOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (o.config.iterations < 1) throw ValidationError("--iters must be at least 1");
    if (o.seeds.empty()) throw ValidationError("no seeds given");
    std::vector<SearchMode> modes;
    if (o.mode == "both") {
      modes = {SearchMode::kIde, SearchMode::kDe};
    } else {
      modes = {parse_search_mode(o.mode)};
    }
    const std::filesystem::path dir = o.out_dir.empty() ? default_output_dir() : o.out_dir;
    ensure_dir(dir);

    std::ofstream summary_file = open_out(dir / "benchmark_summary.csv");
    summary_file << "mode,seeds,iterations,successes,median_first_hit\n";
    std::ofstream seed_file = open_out(dir / "benchmark_seeds.csv");
    seed_file << "mode,seed,first_hit,final_best\n";

    out << std::left << std::setw(6) << "mode" << std::setw(7) << "seeds" << std::setw(7)
        << "iters" << std::setw(11) << "successes" << "median_first_hit\n";
    for (SearchMode mode : modes) {
      IdeConfig config = o.config;
      config.mode = mode;
      BenchmarkSummary s = run_toy_benchmark(config, o.seeds);
      const std::string median =
          s.median_first_hit ? format_double(*s.median_first_hit) : std::string("n/a");
      out << std::left << std::setw(6) << to_string(mode) << std::setw(7) << o.seeds.size()
          << std::setw(7) << config.iterations << std::setw(11) << s.successes << median
          << "\n";
      summary_file << to_string(mode) << ',' << o.seeds.size() << ',' << config.iterations
                   << ',' << s.successes << ',' << median << "\n";

      for (const BenchmarkRun& r : s.runs) {
        seed_file << to_string(mode) << ',' << r.seed << ','
                  << (r.first_hit ? std::to_string(*r.first_hit) : std::string("n/a")) << ','
                  << format_double(r.final_best) << "\n";
        IdeConfig seeded = config;
        seeded.seed = r.seed;
        std::ofstream h = open_out(dir / ("toy_" + std::string(to_string(mode)) + "_seed" +
                                          std::to_string(r.seed) + ".csv"));
        ToyEvaluator toy;
        write_history_header(h, RunMetadata{seeded, space_size(toy_space()).str(),
                                            toy.descriptor(), "toy", std::nullopt});
        for (const auto& rec : r.history.records) write_history_row(h, rec);
      }
    }
    out << "output: " << dir.string() << "\n";
    return kOk;
  });
}

int cmd_cost(const CostOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ArchitectureSpec spec = load_arch_spec(o.arch);
    std::string text = o.structure;
    if (!o.structure_file.empty()) {
      std::ifstream f(o.structure_file);
      if (!f) throw ValidationError("cannot open " + o.structure_file.string());
      std::getline(f, text);
    }
    if (text.empty()) throw ValidationError("no structure given");
    const StructureVector s = parse_structure(text);
    std::ostringstream report;  // nothing is printed unless s is valid
    print_cost(report, spec, s);
    out << "arch: " << spec.name() << "\n";
    out << "structure: " << s.to_string() << "\n";
    out << report.str();
    return kOk;
  });
}

}  // namespace chanprune::cli
