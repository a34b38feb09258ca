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

#include "chanprune/fitness.h"

#include <cmath>

#include "chanprune/error.h"

namespace chanprune {

FitnessValue::FitnessValue(double value) : value_(value) {
  if (!std::isfinite(value)) {
    throw EvaluatorError("evaluator returned a non-finite fitness");
  }
}

std::vector<FitnessValue> Evaluator::evaluate_batch(
    std::span<const StructureVector> batch) {
  std::vector<FitnessValue> out;
  out.reserve(batch.size());
  for (const auto& s : batch) out.push_back(evaluate(s));
  return out;
}

FitnessValue toy_fitness(const StructureVector& x) {
  if (x.size() != ToyEvaluator::kDimension) {
    throw ValidationError("toy expects 30 entries, got " + std::to_string(x.size()));
  }
  std::int64_t sq = 0;
  for (std::int64_t xi : x) {
    if (xi < ToyEvaluator::kLo || xi > ToyEvaluator::kHi) {
      throw ValidationError("toy entry " + std::to_string(xi) + " outside [-9, 9]");
    }
    sq += (xi - 5) * (xi - 5);
  }
  return FitnessValue(-std::sqrt(static_cast<double>(sq)));
}

ToyEvaluator::ToyEvaluator() {
  desc_.name = "toy";
  desc_.deterministic = true;
  desc_.concurrent_safe = true;
  desc_.expected_vector_length = kDimension;
  desc_.value_lo = -14.0 * std::sqrt(30.0);
  desc_.value_hi = 0.0;
}

std::vector<double> surrogate_weights(const ArchitectureSpec& spec) {
  const StructureVector& base = spec.base_structure();
  std::vector<double> flops(spec.num_variables(), 0.0);
  for (std::size_t v = 0; v < spec.num_variables(); ++v) {
    for (int li : spec.layers_of_variable(v)) {
      const LayerSpec& layer = spec.layers()[static_cast<std::size_t>(li)];
      const ResolvedLayer& r = spec.resolved()[static_cast<std::size_t>(li)];
      const double in = static_cast<double>(r.in_channels.resolve(base));
      const double out = static_cast<double>(base[v]);
      if (layer.kind == LayerKind::kConv) {
        flops[v] += static_cast<double>(layer.kernel_h * layer.kernel_w) *
                    (in / static_cast<double>(layer.groups)) * out *
                    static_cast<double>(r.out_h * r.out_w);
      } else {
        flops[v] += in * out;
      }
    }
  }
  double total = 0.0;
  for (double f : flops) total += f;
  for (double& f : flops) f /= total;
  return flops;
}

namespace {

double surrogate_value(const std::vector<double>& weights, const StructureVector& base,
                       const StructureVector& s) {
  double value = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    value += weights[i] * (1.0 - std::exp(-3.0 * static_cast<double>(s[i]) /
                                          static_cast<double>(base[i])));
  }
  return value;
}

}  // namespace

FitnessValue surrogate_fitness(const ArchitectureSpec& spec, const StructureVector& s) {
  compute_cost(spec, s);  // validates s
  return FitnessValue(surrogate_value(surrogate_weights(spec), spec.base_structure(), s));
}

SurrogateEvaluator::SurrogateEvaluator(std::shared_ptr<const ArchitectureSpec> spec)
    : spec_(std::move(spec)), weights_(surrogate_weights(*spec_)) {
  desc_.name = "surrogate:" + spec_->name();
  desc_.deterministic = true;
  desc_.concurrent_safe = true;
  desc_.expected_vector_length = static_cast<std::int64_t>(spec_->num_variables());
  desc_.value_lo = 0.0;
  desc_.value_hi = 1.0;
}

FitnessValue SurrogateEvaluator::evaluate(const StructureVector& s) {
  compute_cost(*spec_, s);
  return FitnessValue(surrogate_value(weights_, spec_->base_structure(), s));
}

CachedEvaluator::CachedEvaluator(std::shared_ptr<Evaluator> inner)
    : inner_(std::move(inner)) {
  if (!inner_) throw EvaluatorError("cannot cache a null evaluator");
  if (!inner_->descriptor().deterministic) {
    throw EvaluatorError("refusing to cache non-deterministic evaluator '" +
                         inner_->descriptor().name + "'");
  }
}

FitnessValue CachedEvaluator::evaluate(const StructureVector& s) {
  ++requests_;
  if (auto it = memo_.find(s); it != memo_.end()) return it->second;
  FitnessValue value = inner_->evaluate(s);
  ++inner_evaluations_;
  memo_.emplace(s, value);
  return value;
}

std::vector<FitnessValue> CachedEvaluator::evaluate_batch(
    std::span<const StructureVector> batch) {
  requests_ += batch.size();
  std::vector<StructureVector> misses;
  std::unordered_map<StructureVector, std::size_t, StructureVectorHash> pending;
  for (const auto& s : batch) {
    if (memo_.contains(s) || pending.contains(s)) continue;
    pending.emplace(s, misses.size());
    misses.push_back(s);
  }
  if (!misses.empty()) {
    std::vector<FitnessValue> fresh = inner_->evaluate_batch(misses);
    inner_evaluations_ += misses.size();
    for (std::size_t i = 0; i < misses.size(); ++i) memo_.emplace(misses[i], fresh[i]);
  }
  std::vector<FitnessValue> out;
  out.reserve(batch.size());
  for (const auto& s : batch) out.push_back(memo_.at(s));
  return out;
}

std::shared_ptr<Evaluator> cached(std::shared_ptr<Evaluator> inner) {
  return std::make_shared<CachedEvaluator>(std::move(inner));
}

}  // namespace chanprune
