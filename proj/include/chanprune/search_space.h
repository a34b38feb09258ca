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

#ifndef CHANPRUNE_SEARCH_SPACE_H_
#define CHANPRUNE_SEARCH_SPACE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chanprune/arch_model.h"
#include "chanprune/structure.h"

namespace chanprune {

using BigInt = boost::multiprecision::cpp_int;

// Admissible values {lo, lo + step, ...} clipped to [lo, hi].
struct BoxDimension {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t step = 1;

  std::int64_t count() const { return (hi - lo) / step + 1; }
  std::int64_t max_admissible() const { return lo + (count() - 1) * step; }
  bool admissible(std::int64_t v) const {
    return v >= lo && v <= hi && (v - lo) % step == 0;
  }
};

class IntegerBox {
 public:
  IntegerBox() = default;
  // Throws ValidationError on an empty dimension or step < 1.
  explicit IntegerBox(std::vector<BoxDimension> dims);

  // Every dimension [lo, hi] with the same step.
  static IntegerBox uniform(std::size_t n, std::int64_t lo, std::int64_t hi,
                            std::int64_t step = 1);

  std::size_t size() const { return dims_.size(); }
  const BoxDimension& operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<BoxDimension>& dims() const { return dims_; }

 private:
  std::vector<BoxDimension> dims_;
};

// Ties a space to the sparsity constraints r_f >= R_f and r_p >= R_p.
struct SparsityLink {
  std::shared_ptr<const ArchitectureSpec> arch;
  SparsityTargets targets;
};

// The compressed search space: an integer box, optionally constrained by
// pruning-rate targets on an architecture.
class CompressedSpace {
 public:
  CompressedSpace() = default;
  explicit CompressedSpace(IntegerBox box,
                           std::optional<SparsityLink> link = std::nullopt);

  const IntegerBox& box() const { return box_; }
  std::size_t dimension() const { return box_.size(); }
  const std::optional<SparsityLink>& link() const { return link_; }

  bool contains(const StructureVector& v) const;
  // Admissible and, when linked, meeting the targets.
  bool feasible(const StructureVector& v) const;

  // Every coordinate at its lowest admissible value.
  StructureVector minimum() const;

 private:
  IntegerBox box_;
  std::optional<SparsityLink> link_;
};

// D^c_i = {e_i, 2e_i, ..., floor(c_i/e_i) e_i}. Throws ValidationError on a
// length mismatch or e_i outside [1, c_i].
CompressedSpace build_space(const StructureVector& base, const StepVector& steps);

// Pruning space over an architecture's base structure, linked to targets.
CompressedSpace build_space(std::shared_ptr<const ArchitectureSpec> arch,
                            const StepVector& steps,
                            const SparsityTargets& targets);

// Product of per-dimension counts, exact.
BigInt space_size(const CompressedSpace& space);

StructureVector sample_uniform(const CompressedSpace& space, Rng& rng);

// Snap every entry down onto its dimension's grid, then clamp into
// [lo, max_admissible]. Idempotent.
StructureVector snap_and_clamp(const StructureVector& v,
                               const CompressedSpace& space);

// snap_and_clamp followed by random repair: while the targets are unmet,
// pick a uniform index and lower it by one step if it is above its minimum.
// Throws MinimumReached when the all-minimum vector is itself infeasible.
// Without a link this is snap_and_clamp.
StructureVector rescale(const StructureVector& v, const CompressedSpace& space,
                        Rng& rng);

// Same procedure against an explicit architecture and targets.
StructureVector rescale(const StructureVector& v, const CompressedSpace& space,
                        const ArchitectureSpec& spec,
                        const SparsityTargets& targets, Rng& rng);

// Step-vector rules.
StepVector eighth_steps(const StructureVector& base);
// e_i = multiple when it fits in c_i, otherwise c_i.
StepVector multiple_steps(const StructureVector& base, std::int64_t multiple);
// JSON object mapping variable index (as a string) to e_i; indices that are
// absent fall back to the eighth rule.
StepVector load_step_file(const std::filesystem::path& path,
                          const StructureVector& base);

}  // namespace chanprune

#endif  // CHANPRUNE_SEARCH_SPACE_H_
