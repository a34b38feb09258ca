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

#ifndef CHANPRUNE_HISTORY_H_
#define CHANPRUNE_HISTORY_H_

#include <iosfwd>
#include <optional>
#include <string>

#include "chanprune/arch_model.h"
#include "chanprune/fitness.h"
#include "chanprune/ide_engine.h"

namespace chanprune {

// Echoed into the '#' header of a history file.
struct RunMetadata {
  IdeConfig config;
  std::string space_size;
  EvaluatorDescriptor evaluator;
  std::string arch_name;
  std::optional<SparsityTargets> targets;
};

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

// Header lines followed by the column row
// "generation,best_fitness,best_vector,evaluations,reinitializations".
// best_vector entries are ';'-separated.
void write_history_header(std::ostream& out, const RunMetadata& meta);
void write_history_row(std::ostream& out, const HistoryRecord& record);

// Parses the rows of a history file, skipping the header. Throws
// ValidationError.
SearchHistory read_history(std::istream& in);

}  // namespace chanprune

#endif  // CHANPRUNE_HISTORY_H_
