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

#ifndef CHANPRUNE_FITNESS_H_
#define CHANPRUNE_FITNESS_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "chanprune/arch_model.h"
#include "chanprune/structure.h"

namespace chanprune {

// Finite score, higher is better.
class FitnessValue {
 public:
  // Throws EvaluatorError on NaN or infinity.
  explicit FitnessValue(double value);

  double value() const { return value_; }

  friend bool operator==(FitnessValue, FitnessValue) = default;
  friend auto operator<=>(FitnessValue a, FitnessValue b) {
    return a.value_ <=> b.value_;
  }

 private:
  double value_;
};

struct EvaluatorDescriptor {
  std::string name;
  bool deterministic = true;
  bool concurrent_safe = false;
  std::int64_t expected_vector_length = 0;
  double value_lo = 0.0;
  double value_hi = 1.0;

  friend bool operator==(const EvaluatorDescriptor&,
                         const EvaluatorDescriptor&) = default;
};

class Evaluator {
 public:
  virtual ~Evaluator() = default;

  virtual const EvaluatorDescriptor& descriptor() const = 0;
  virtual FitnessValue evaluate(const StructureVector& s) = 0;

  // Results in input order. Serial unless an implementation can do better.
  virtual std::vector<FitnessValue> evaluate_batch(
      std::span<const StructureVector> batch);
};

// -||x - 5||_2 over 30 integers in [-9, 9].
FitnessValue toy_fitness(const StructureVector& x);

class ToyEvaluator : public Evaluator {
 public:
  static constexpr std::size_t kDimension = 30;
  static constexpr std::int64_t kLo = -9;
  static constexpr std::int64_t kHi = 9;

  ToyEvaluator();
  const EvaluatorDescriptor& descriptor() const override { return desc_; }
  FitnessValue evaluate(const StructureVector& x) override {
    return toy_fitness(x);
  }

 private:
  EvaluatorDescriptor desc_;
};

// Per-variable weights: each variable's share of base-structure FLOPs among
// the layers whose output channels it controls. Sums to 1.
std::vector<double> surrogate_weights(const ArchitectureSpec& spec);

// sum_i w_i (1 - exp(-3 s_i / c_i)); strictly increasing in every coordinate.
FitnessValue surrogate_fitness(const ArchitectureSpec& spec,
                               const StructureVector& s);

class SurrogateEvaluator : public Evaluator {
 public:
  explicit SurrogateEvaluator(std::shared_ptr<const ArchitectureSpec> spec);
  const EvaluatorDescriptor& descriptor() const override { return desc_; }
  FitnessValue evaluate(const StructureVector& s) override;

 private:
  std::shared_ptr<const ArchitectureSpec> spec_;
  std::vector<double> weights_;
  EvaluatorDescriptor desc_;
};

// Adapts a plain callable.
class FunctionEvaluator : public Evaluator {
 public:
  using Fn = std::function<double(const StructureVector&)>;

  FunctionEvaluator(EvaluatorDescriptor desc, Fn fn)
      : desc_(std::move(desc)), fn_(std::move(fn)) {}
  const EvaluatorDescriptor& descriptor() const override { return desc_; }
  FitnessValue evaluate(const StructureVector& s) override {
    return FitnessValue(fn_(s));
  }

 private:
  EvaluatorDescriptor desc_;
  Fn fn_;
};

// Content-addressed memo in front of a deterministic evaluator.
class CachedEvaluator : public Evaluator {
 public:
  // Throws EvaluatorError if inner is not deterministic.
  explicit CachedEvaluator(std::shared_ptr<Evaluator> inner);

  const EvaluatorDescriptor& descriptor() const override {
    return inner_->descriptor();
  }
  FitnessValue evaluate(const StructureVector& s) override;
  std::vector<FitnessValue> evaluate_batch(
      std::span<const StructureVector> batch) override;

  std::uint64_t requests() const { return requests_; }
  std::uint64_t inner_evaluations() const { return inner_evaluations_; }
  std::uint64_t hits() const { return requests_ - inner_evaluations_; }

 private:
  std::shared_ptr<Evaluator> inner_;
  std::unordered_map<StructureVector, FitnessValue, StructureVectorHash> memo_;
  std::uint64_t requests_ = 0;
  std::uint64_t inner_evaluations_ = 0;
};

std::shared_ptr<Evaluator> cached(std::shared_ptr<Evaluator> inner);

}  // namespace chanprune

#endif  // CHANPRUNE_FITNESS_H_
