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

#include "chanprune/ide_engine.h"

#include <cmath>

#include "chanprune/error.h"

namespace chanprune {

namespace {

std::size_t pick_other(std::size_t n, std::initializer_list<std::size_t> taken,
                       std::uniform_int_distribution<std::size_t>& pick, Rng& rng) {
  for (;;) {
    std::size_t k = pick(rng);
    if (k == n) continue;
    bool clash = false;
    for (std::size_t t : taken) clash = clash || (t == k);
    if (!clash) return k;
  }
}

void check_evaluator(const CompressedSpace& space, const Evaluator& evaluator) {
  const auto want = static_cast<std::int64_t>(space.dimension());
  if (evaluator.descriptor().expected_vector_length != want) {
    throw ValidationError("evaluator '" + evaluator.descriptor().name + "' expects length " +
                          std::to_string(evaluator.descriptor().expected_vector_length) +
                          ", search space has dimension " + std::to_string(want));
  }
}

class BestTracker {
 public:
  void offer(const StructureVector& v, FitnessValue f) {
    if (!best_.fitness || f > *best_.fitness) {
      best_.vector = v;
      best_.fitness = f;
    }
  }
  const Individual& best() const { return best_; }

 private:
  Individual best_;
};

}  // namespace

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::kIde ? "ide" : "de";
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "ide" || text == "IDE") return SearchMode::kIde;
  if (text == "de" || text == "DE") return SearchMode::kDe;
  throw ValidationError("unknown search mode '" + std::string(text) + "'");
}

void IdeConfig::validate() const {
  if (population_size < 4) {
    throw ValidationError("population size must be at least 4 (three distinct donors)");
  }
  if (iterations < 0) throw ValidationError("iterations must be non-negative");
  if (!(differential_weight >= 0.0 && differential_weight <= 2.0)) {
    throw ValidationError("differential weight must lie in [0, 2]");
  }
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
    throw ValidationError("crossover probability must lie in [0, 1]");
  }
  if (stagnation_limit < 1) throw ValidationError("stagnation limit must be positive");
}

Population initialize(const CompressedSpace& space, Evaluator& evaluator,
                      const IdeConfig& config, Rng& rng) {
  check_evaluator(space, evaluator);
  std::vector<StructureVector> vectors;
  vectors.reserve(static_cast<std::size_t>(config.population_size));
  for (int n = 0; n < config.population_size; ++n) {
    vectors.push_back(rescale(sample_uniform(space, rng), space, rng));
  }
  std::vector<FitnessValue> fitness = evaluator.evaluate_batch(vectors);
  Population pop;
  for (std::size_t n = 0; n < vectors.size(); ++n) {
    pop.individuals.push_back({std::move(vectors[n]), fitness[n], 0});
  }
  return pop;
}

StructureVector mutate(const Population& population, std::size_t n,
                       const IdeConfig& config, const CompressedSpace& space, Rng& rng) {
  const std::size_t size = population.individuals.size();
  if (size < 4) throw ValidationError("mutation needs a population of at least 4");
  std::uniform_int_distribution<std::size_t> pick(0, size - 1);
  const std::size_t p = pick_other(n, {}, pick, rng);
  const std::size_t q = pick_other(n, {p}, pick, rng);
  const std::size_t r = pick_other(n, {p, q}, pick, rng);
  const StructureVector& xp = population.individuals[p].vector;
  const StructureVector& xq = population.individuals[q].vector;
  const StructureVector& xr = population.individuals[r].vector;

  std::vector<std::int64_t> v(xp.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double raw = static_cast<double>(xp[j]) +
                       config.differential_weight * static_cast<double>(xq[j] - xr[j]);
    v[j] = static_cast<std::int64_t>(std::trunc(raw));
  }
  return rescale(StructureVector(std::move(v)), space, rng);
}

StructureVector crossover(const Individual& target, const StructureVector& mutant,
                          const IdeConfig& config, Rng& rng) {
  if (target.vector.size() != mutant.size()) {
    throw ValidationError("crossover of vectors with different lengths");
  }
  std::size_t forced = mutant.size();
  if (config.force_mutant_gene && !mutant.empty()) {
    forced = std::uniform_int_distribution<std::size_t>(0, mutant.size() - 1)(rng);
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::int64_t> u(mutant.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const bool take = coin(rng) < config.crossover_prob || j == forced;
    u[j] = take ? mutant[j] : target.vector[j];
  }
  return StructureVector(std::move(u));
}

Individual select(const Individual& target, const StructureVector& candidate,
                  FitnessValue candidate_fitness) {
  if (!target.fitness) throw EvaluatorError("selection against an unevaluated target");
  if (candidate_fitness > *target.fitness) return {candidate, candidate_fitness, 0};
  Individual kept = target;
  ++kept.stagnation;
  return kept;
}

Individual select(const Individual& target, const StructureVector& candidate,
                  Evaluator& evaluator) {
  return select(target, candidate, evaluator.evaluate(candidate));
}

int reinitialize_stagnant(Population& population, const CompressedSpace& space,
                          Evaluator& evaluator, const IdeConfig& config, Rng& rng) {
  if (config.mode == SearchMode::kDe) return 0;
  std::vector<std::size_t> stale;
  std::vector<StructureVector> fresh;
  for (std::size_t n = 0; n < population.individuals.size(); ++n) {
    if (population.individuals[n].stagnation >= config.stagnation_limit) {
      stale.push_back(n);
      fresh.push_back(rescale(sample_uniform(space, rng), space, rng));
    }
  }
  if (stale.empty()) return 0;
  std::vector<FitnessValue> fitness = evaluator.evaluate_batch(fresh);
  for (std::size_t k = 0; k < stale.size(); ++k) {
    population.individuals[stale[k]] = {std::move(fresh[k]), fitness[k], 0};
  }
  return static_cast<int>(stale.size());
}

SearchResult run(const CompressedSpace& space, Evaluator& evaluator,
                 const IdeConfig& config, const HistorySink& sink) {
  config.validate();
  check_evaluator(space, evaluator);
  Rng rng(config.seed);
  BestTracker tracker;
  SearchResult result;
  std::uint64_t evaluations = 0;
  std::uint64_t reinits = 0;

  auto emit = [&](int generation) {
    HistoryRecord rec{generation, tracker.best().fitness->value(), tracker.best().vector,
                      evaluations, reinits};
    if (sink) sink(rec);
    result.history.records.push_back(std::move(rec));
  };

  Population pop = initialize(space, evaluator, config, rng);
  evaluations += pop.individuals.size();
  for (const auto& ind : pop.individuals) tracker.offer(ind.vector, *ind.fitness);
  emit(0);

  const std::size_t size = pop.individuals.size();
  for (int t = 1; t <= config.iterations; ++t) {
    // Donors and targets all come from generation t - 1.
    std::vector<StructureVector> trials;
    trials.reserve(size);
    for (std::size_t n = 0; n < size; ++n) {
      StructureVector mutant = mutate(pop, n, config, space, rng);
      trials.push_back(
          rescale(crossover(pop.individuals[n], mutant, config, rng), space, rng));
    }
    std::vector<FitnessValue> fitness = evaluator.evaluate_batch(trials);
    evaluations += size;

    Population next;
    next.generation = t;
    next.individuals.reserve(size);
    for (std::size_t n = 0; n < size; ++n) {
      tracker.offer(trials[n], fitness[n]);
      next.individuals.push_back(select(pop.individuals[n], trials[n], fitness[n]));
    }
    const int replaced = reinitialize_stagnant(next, space, evaluator, config, rng);
    if (replaced > 0) {
      evaluations += static_cast<std::uint64_t>(replaced);
      reinits += static_cast<std::uint64_t>(replaced);
      for (const auto& ind : next.individuals) {
        if (ind.stagnation == 0) tracker.offer(ind.vector, *ind.fitness);
      }
    }
    pop = std::move(next);
    emit(t);
  }

  result.best = tracker.best();
  result.final_population = std::move(pop);
  return result;
}

}  // namespace chanprune
