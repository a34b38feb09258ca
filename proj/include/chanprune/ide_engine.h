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

#ifndef CHANPRUNE_IDE_ENGINE_H_
#define CHANPRUNE_IDE_ENGINE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "chanprune/fitness.h"
#include "chanprune/search_space.h"
#include "chanprune/structure.h"

namespace chanprune {

// kDe is the same loop without stagnation reinitialization.
enum class SearchMode { kIde, kDe };

std::string_view to_string(SearchMode mode);
// "ide" or "de". Throws ValidationError.
SearchMode parse_search_mode(std::string_view text);

struct IdeConfig {
  int population_size = 10;
  int iterations = 100;
  double differential_weight = 0.5;
  double crossover_prob = 0.8;
  int stagnation_limit = 4;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::kIde;
  // Canonical DE guarantees one mutant gene per trial; off by default.
  bool force_mutant_gene = false;

  // Throws ValidationError.
  void validate() const;
};

struct Individual {
  StructureVector vector;
  std::optional<FitnessValue> fitness;
  int stagnation = 0;
};

struct Population {
  std::vector<Individual> individuals;
  int generation = 0;
};

struct HistoryRecord {
  int generation = 0;
  double best_fitness = 0.0;
  StructureVector best_vector;
  std::uint64_t evaluations = 0;
  std::uint64_t reinitializations = 0;

  friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;
};

struct SearchHistory {
  std::vector<HistoryRecord> records;
};

struct SearchResult {
  Individual best;
  SearchHistory history;
  Population final_population;
};

// Called with each history record as soon as it is complete.
using HistorySink = std::function<void(const HistoryRecord&)>;

// N uniform samples, each rescaled into feasibility, then evaluated.
Population initialize(const CompressedSpace& space, Evaluator& evaluator,
                      const IdeConfig& config, Rng& rng);

// X_p + F (X_q - X_r) with p, q, r distinct and different from n, truncated
// toward zero and rescaled.
StructureVector mutate(const Population& population, std::size_t n,
                       const IdeConfig& config, const CompressedSpace& space,
                       Rng& rng);

// Per gene: mutant if U[0,1) < CR, else target. The result is not rescaled.
StructureVector crossover(const Individual& target, const StructureVector& mutant,
                          const IdeConfig& config, Rng& rng);

// Candidate replaces the target only on strictly higher fitness; otherwise
// the target's stagnation count grows by one.
Individual select(const Individual& target, const StructureVector& candidate,
                  FitnessValue candidate_fitness);
Individual select(const Individual& target, const StructureVector& candidate,
                  Evaluator& evaluator);

// Resamples every individual whose stagnation reached the limit. No-op in DE
// mode. Returns how many were replaced.
int reinitialize_stagnant(Population& population, const CompressedSpace& space,
                          Evaluator& evaluator, const IdeConfig& config, Rng& rng);

// Full search. `best` is the best individual ever evaluated, which can be
// better than anything left in the final population.
SearchResult run(const CompressedSpace& space, Evaluator& evaluator,
                 const IdeConfig& config, const HistorySink& sink = {});

}  // namespace chanprune

#endif  // CHANPRUNE_IDE_ENGINE_H_
