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

#ifndef CHANPRUNE_STRUCTURE_H_
#define CHANPRUNE_STRUCTURE_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chanprune {

// All stochastic operations take the generator explicitly; callers own it.
using Rng = std::mt19937_64;

// Integer channel configuration, one entry per search variable.
class StructureVector {
 public:
  StructureVector() = default;
  explicit StructureVector(std::vector<std::int64_t> values)
      : values_(std::move(values)) {}
  StructureVector(std::initializer_list<std::int64_t> values)
      : values_(values) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::int64_t operator[](std::size_t i) const { return values_[i]; }
  std::int64_t& operator[](std::size_t i) { return values_[i]; }

  std::span<const std::int64_t> values() const { return values_; }
  const std::vector<std::int64_t>& vec() const { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  // "a,b,c" with the given separator.
  std::string to_string(char sep = ',') const;

  friend bool operator==(const StructureVector&,
                         const StructureVector&) = default;
  friend auto operator<=>(const StructureVector&,
                          const StructureVector&) = default;

 private:
  std::vector<std::int64_t> values_;
};

struct StructureVectorHash {
  std::size_t operator()(const StructureVector& v) const noexcept;
};

// Parses "c1,c2,..." (whitespace tolerated). Throws ValidationError.
StructureVector parse_structure(std::string_view text);

// Pruning granularity e_i per search variable.
struct StepVector {
  std::vector<std::int64_t> steps;

  std::size_t size() const { return steps.size(); }
  std::int64_t operator[](std::size_t i) const { return steps[i]; }
};

}  // namespace chanprune

#endif  // CHANPRUNE_STRUCTURE_H_
