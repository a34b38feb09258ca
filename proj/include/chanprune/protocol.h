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

#ifndef CHANPRUNE_PROTOCOL_H_
#define CHANPRUNE_PROTOCOL_H_

// Evaluation wire protocol: one JSON object per line.
//
//   client -> {"type":"hello","version":1}
//   server -> {"type":"descriptor","name":...,"deterministic":...,
//              "concurrent_safe":...,"expected_vector_length":...,
//              "value_range":[lo,hi]}
//   client -> {"type":"eval","id":7,"structure":[8,16]}
//   server -> {"type":"result","id":7,"fitness":0.91}
//          or {"type":"error","id":7,"message":"..."}
//   client -> {"type":"bye"}

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>

#include "chanprune/fitness.h"
#include "chanprune/structure.h"
#include "chanprune/transport.h"

namespace chanprune::protocol {

inline constexpr int kVersion = 1;

struct Hello {
  int version = kVersion;
};
struct Descriptor {
  EvaluatorDescriptor descriptor;
};
struct Eval {
  std::uint64_t id = 0;
  StructureVector structure;
};
struct Result {
  std::uint64_t id = 0;
  double fitness = 0.0;
};
struct ErrorReply {
  std::uint64_t id = 0;
  std::string message;
};
struct Bye {};

using Message = std::variant<Hello, Descriptor, Eval, Result, ErrorReply, Bye>;

// Single line, no terminator.
std::string encode(const Message& message);
// Throws ProtocolError on malformed JSON, missing fields or unknown types.
Message decode(std::string_view line);

using ServeFn = std::function<double(const StructureVector&)>;

// Answers requests on `channel` until "bye" or end of stream. Malformed
// messages, wrong-length structures and exceptions from `fn` become error
// replies; the loop keeps running. Returns the number of eval requests seen.
std::uint64_t serve(LineChannel& channel, const EvaluatorDescriptor& descriptor,
                    const ServeFn& fn);

}  // namespace chanprune::protocol

#endif  // CHANPRUNE_PROTOCOL_H_
