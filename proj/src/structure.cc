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

#include "chanprune/structure.h"

#include <charconv>
#include <sstream>

#include "chanprune/error.h"

namespace chanprune {

std::string StructureVector::to_string(char sep) const {
  std::string out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += std::to_string(values_[i]);
  }
  return out;
}

std::size_t StructureVectorHash::operator()(
    const StructureVector& v) const noexcept {
  // FNV-1a over the raw entries.
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t x : v) {
    auto u = static_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return static_cast<std::size_t>(h);
}

StructureVector parse_structure(std::string_view text) {
  std::vector<std::int64_t> values;
  std::size_t pos = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view field = text.substr(pos, end - pos);
    while (!field.empty() && is_space(field.front())) field.remove_prefix(1);
    while (!field.empty() && is_space(field.back())) field.remove_suffix(1);
    if (field.empty()) {
      if (end == text.size() && values.empty() && pos == 0) break;
      throw ValidationError("empty entry in structure vector \"" +
                            std::string(text) + "\"");
    }
    std::int64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw ValidationError("not an integer in structure vector: \"" +
                            std::string(field) + "\"");
    }
    values.push_back(value);
    pos = end + 1;
  }
  if (values.empty()) throw ValidationError("empty structure vector");
  return StructureVector(std::move(values));
}

}  // namespace chanprune
