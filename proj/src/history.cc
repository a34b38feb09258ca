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

#include "chanprune/history.h"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "chanprune/error.h"

namespace chanprune {

namespace {

constexpr const char* kColumns =
    "generation,best_fitness,best_vector,evaluations,reinitializations";

template <class T>
T parse_number(const std::string& field, const std::string& line) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ValidationError("bad history row: " + line);
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_history_header(std::ostream& out, const RunMetadata& meta) {
  const IdeConfig& c = meta.config;
  const EvaluatorDescriptor& e = meta.evaluator;
  out << "# chanprune-history v1\n";
  out << "# mode=" << to_string(c.mode) << " population=" << c.population_size
      << " iterations=" << c.iterations << " f=" << format_double(c.differential_weight)
      << " cr=" << format_double(c.crossover_prob) << " stagnation=" << c.stagnation_limit
      << " seed=" << c.seed << " force_mutant_gene=" << (c.force_mutant_gene ? 1 : 0)
      << "\n";
  out << "# space_size=" << meta.space_size << "\n";
  out << "# evaluator=" << e.name << " deterministic=" << (e.deterministic ? 1 : 0)
      << " concurrent_safe=" << (e.concurrent_safe ? 1 : 0)
      << " length=" << e.expected_vector_length << " range=" << format_double(e.value_lo)
      << ";" << format_double(e.value_hi) << "\n";
  if (!meta.arch_name.empty()) out << "# arch=" << meta.arch_name << "\n";
  if (meta.targets) {
    out << "# targets rf=" << format_double(meta.targets->flops_rate)
        << " rp=" << format_double(meta.targets->params_rate) << "\n";
  }
  out << kColumns << "\n";
}

void write_history_row(std::ostream& out, const HistoryRecord& r) {
  out << r.generation << ',' << format_double(r.best_fitness) << ','
      << r.best_vector.to_string(';') << ',' << r.evaluations << ','
      << r.reinitializations << '\n';
}

SearchHistory read_history(std::istream& in) {
  SearchHistory history;
  std::string line;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_columns) {
      if (line != kColumns) throw ValidationError("unexpected history columns: " + line);
      seen_columns = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw ValidationError("bad history row: " + line);
    std::string vec = fields[2];
    for (char& ch : vec) {
      if (ch == ';') ch = ',';
    }
    HistoryRecord r;
    r.generation = parse_number<int>(fields[0], line);
    r.best_fitness = parse_number<double>(fields[1], line);
    r.best_vector = parse_structure(vec);
    r.evaluations = parse_number<std::uint64_t>(fields[3], line);
    r.reinitializations = parse_number<std::uint64_t>(fields[4], line);
    history.records.push_back(std::move(r));
  }
  return history;
}

}  // namespace chanprune
