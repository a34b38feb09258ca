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

#ifndef CHANPRUNE_BENCHMARK_H_
#define CHANPRUNE_BENCHMARK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chanprune/ide_engine.h"
#include "chanprune/search_space.h"

namespace chanprune {

// The 30-dimensional integer toy problem: maximize -||x - 5|| on [-9, 9]^30.
CompressedSpace toy_space();

struct BenchmarkRun {
  std::uint64_t seed = 0;
  // First generation whose best-so-far reached fitness 0.
  std::optional<int> first_hit;
  double final_best = 0.0;
  SearchHistory history;
};

struct BenchmarkSummary {
  SearchMode mode = SearchMode::kIde;
  int iterations = 0;
  int successes = 0;
  // Failed seeds count as never hitting; nullopt when fewer than half hit.
  std::optional<double> median_first_hit;
  std::vector<BenchmarkRun> runs;
};

// Runs `base` (with its seed replaced) once per seed.
BenchmarkSummary run_toy_benchmark(const IdeConfig& base,
                                    std::span<const std::uint64_t> seeds);

}  // namespace chanprune

#endif  // CHANPRUNE_BENCHMARK_H_
