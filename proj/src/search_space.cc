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

#include "chanprune/search_space.h"

#include <fstream>
#include <sstream>

#include "chanprune/error.h"
#include "json.hpp"

namespace chanprune {

namespace {

// Floor division that rounds toward negative infinity.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void check_length(const StructureVector& v, const CompressedSpace& space) {
  if (v.size() != space.dimension()) {
    throw ValidationError("vector of length " + std::to_string(v.size()) +
                          " does not match space dimension " +
                          std::to_string(space.dimension()));
  }
}

}  // namespace

IntegerBox::IntegerBox(std::vector<BoxDimension> dims) : dims_(std::move(dims)) {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const BoxDimension& d = dims_[i];
    if (d.step < 1 || d.lo > d.hi) {
      throw ValidationError("empty box dimension " + std::to_string(i));
    }
  }
}

IntegerBox IntegerBox::uniform(std::size_t n, std::int64_t lo, std::int64_t hi,
                               std::int64_t step) {
  return IntegerBox(std::vector<BoxDimension>(n, BoxDimension{lo, hi, step}));
}

CompressedSpace::CompressedSpace(IntegerBox box, std::optional<SparsityLink> link)
    : box_(std::move(box)), link_(std::move(link)) {
  if (link_ && (!link_->arch || link_->arch->num_variables() != box_.size())) {
    throw ValidationError("space dimension does not match the architecture");
  }
}

bool CompressedSpace::contains(const StructureVector& v) const {
  if (v.size() != box_.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!box_[i].admissible(v[i])) return false;
  }
  return true;
}

bool CompressedSpace::feasible(const StructureVector& v) const {
  if (!contains(v)) return false;
  return !link_ || is_feasible(*link_->arch, v, link_->targets);
}

StructureVector CompressedSpace::minimum() const {
  std::vector<std::int64_t> values;
  values.reserve(box_.size());
  for (const auto& d : box_.dims()) values.push_back(d.lo);
  return StructureVector(std::move(values));
}

CompressedSpace build_space(const StructureVector& base, const StepVector& steps) {
  if (base.size() != steps.size()) {
    throw ValidationError("step vector has " + std::to_string(steps.size()) +
                          " entries, structure has " + std::to_string(base.size()));
  }
  if (base.empty()) throw ValidationError("empty structure vector");
  std::vector<BoxDimension> dims;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (steps[i] < 1 || steps[i] > base[i]) {
      throw ValidationError("step " + std::to_string(steps[i]) + " at index " +
                            std::to_string(i) + " outside [1, " +
                            std::to_string(base[i]) + "]");
    }
    dims.push_back({steps[i], base[i], steps[i]});
  }
  return CompressedSpace(IntegerBox(std::move(dims)));
}

CompressedSpace build_space(std::shared_ptr<const ArchitectureSpec> arch,
                            const StepVector& steps,
                            const SparsityTargets& targets) {
  CompressedSpace plain = build_space(arch->base_structure(), steps);
  return CompressedSpace(plain.box(), SparsityLink{std::move(arch), targets});
}

BigInt space_size(const CompressedSpace& space) {
  BigInt size = 1;
  for (const auto& d : space.box().dims()) size *= d.count();
  return size;
}

StructureVector sample_uniform(const CompressedSpace& space, Rng& rng) {
  std::vector<std::int64_t> values;
  values.reserve(space.dimension());
  for (const auto& d : space.box().dims()) {
    std::uniform_int_distribution<std::int64_t> pick(0, d.count() - 1);
    values.push_back(d.lo + pick(rng) * d.step);
  }
  return StructureVector(std::move(values));
}

StructureVector snap_and_clamp(const StructureVector& v, const CompressedSpace& space) {
  check_length(v, space);
  std::vector<std::int64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const BoxDimension& d = space.box()[i];
    std::int64_t x = d.lo + floor_div(v[i] - d.lo, d.step) * d.step;
    if (x < d.lo) x = d.lo;
    if (x > d.max_admissible()) x = d.max_admissible();
    out[i] = x;
  }
  return StructureVector(std::move(out));
}

StructureVector rescale(const StructureVector& v, const CompressedSpace& space,
                        const ArchitectureSpec& spec,
                        const SparsityTargets& targets, Rng& rng) {
  StructureVector x = snap_and_clamp(v, space);
  if (is_feasible(spec, x, targets)) return x;

  const StructureVector floor = space.minimum();
  if (!is_feasible(spec, floor, targets)) {
    const PruningRates best = pruning_rates(spec, floor);
    throw MinimumReached(
        "sparsity targets (" + std::to_string(targets.flops_rate) + ", " +
        std::to_string(targets.params_rate) +
        ") unattainable: all-minimum structure reaches (" +
        std::to_string(best.flops_rate) + ", " + std::to_string(best.params_rate) + ")");
  }

  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  do {
    const std::size_t i = pick(rng);
    const BoxDimension& d = space.box()[i];
    if (x[i] > d.lo) x[i] -= d.step;
  } while (!is_feasible(spec, x, targets));
  return x;
}

StructureVector rescale(const StructureVector& v, const CompressedSpace& space,
                        Rng& rng) {
  if (!space.link()) return snap_and_clamp(v, space);
  return rescale(v, space, *space.link()->arch, space.link()->targets, rng);
}

StepVector eighth_steps(const StructureVector& base) {
  StepVector e;
  for (std::int64_t c : base) e.steps.push_back(std::max<std::int64_t>(1, c / 8));
  return e;
}

StepVector multiple_steps(const StructureVector& base, std::int64_t multiple) {
  if (multiple < 1) throw ValidationError("step multiple must be positive");
  StepVector e;
  for (std::int64_t c : base) e.steps.push_back(std::min(multiple, c));
  return e;
}

StepVector load_step_file(const std::filesystem::path& path,
                          const StructureVector& base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open step file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(path.string() + ": expected an object");
  StepVector steps = eighth_steps(base);
  for (const auto& [key, value] : doc.items()) {
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ValidationError(path.string() + ": key '" + key + "' is not a variable index");
    }
    if (idx >= base.size()) {
      throw ValidationError(path.string() + ": variable index " + key + " out of range");
    }
    if (!value.is_number_integer()) {
      throw ValidationError(path.string() + ": step for " + key + " must be an integer");
    }
    steps.steps[idx] = value.get<std::int64_t>();
  }
  return steps;
}

}  // namespace chanprune
