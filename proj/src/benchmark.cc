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

#include "chanprune/benchmark.h"

#include <algorithm>
#include <limits>

#include "chanprune/fitness.h"

namespace chanprune {

CompressedSpace toy_space() {
  return CompressedSpace(IntegerBox::uniform(ToyEvaluator::kDimension, ToyEvaluator::kLo,
                                             ToyEvaluator::kHi, 1));
}

BenchmarkSummary run_toy_benchmark(const IdeConfig& base,
                                    std::span<const std::uint64_t> seeds) {
  const CompressedSpace space = toy_space();
  BenchmarkSummary summary;
  summary.mode = base.mode;
  summary.iterations = base.iterations;
  std::vector<double> hits;
  for (std::uint64_t seed : seeds) {
    IdeConfig config = base;
    config.seed = seed;
    ToyEvaluator evaluator;
    SearchResult result = run(space, evaluator, config);
    BenchmarkRun r;
    r.seed = seed;
    r.final_best = result.best.fitness->value();
    for (const auto& rec : result.history.records) {
      if (rec.best_fitness == 0.0) {
        r.first_hit = rec.generation;
        break;
      }
    }
    r.history = std::move(result.history);
    if (r.first_hit) ++summary.successes;
    hits.push_back(r.first_hit ? *r.first_hit : std::numeric_limits<double>::infinity());
    summary.runs.push_back(std::move(r));
  }
  if (!hits.empty()) {
    std::sort(hits.begin(), hits.end());
    const std::size_t m = hits.size();
    const double median = (m % 2 == 1) ? hits[m / 2] : 0.5 * (hits[m / 2 - 1] + hits[m / 2]);
    if (median != std::numeric_limits<double>::infinity()) summary.median_first_hit = median;
  }
  return summary;
}

}  // namespace chanprune
