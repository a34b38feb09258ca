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

#include "chanprune/protocol.h"

#include "chanprune/error.h"
#include "json.hpp"

namespace chanprune::protocol {

namespace {

using ojson = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const ojson& field(const ojson& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw ProtocolError(std::string("message lacks field '") + key + "'");
  }
  return *it;
}

std::uint64_t id_of(const ojson& doc) {
  const ojson& id = field(doc, "id");
  if (!id.is_number_unsigned() && !(id.is_number_integer() && id.get<std::int64_t>() >= 0)) {
    throw ProtocolError("'id' must be a non-negative integer");
  }
  return id.get<std::uint64_t>();
}

bool bool_field(const ojson& doc, const char* key) {
  const ojson& v = field(doc, key);
  if (!v.is_boolean()) throw ProtocolError(std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

double number_field(const ojson& v, const char* key) {
  if (!v.is_number()) throw ProtocolError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::string encode(const Message& message) {
  ojson doc = std::visit(
      Overloaded{
          [](const Hello& m) { return ojson{{"type", "hello"}, {"version", m.version}}; },
          [](const Descriptor& m) {
            const EvaluatorDescriptor& d = m.descriptor;
            return ojson{{"type", "descriptor"},
                         {"name", d.name},
                         {"deterministic", d.deterministic},
                         {"concurrent_safe", d.concurrent_safe},
                         {"expected_vector_length", d.expected_vector_length},
                         {"value_range", ojson::array({d.value_lo, d.value_hi})}};
          },
          [](const Eval& m) {
            return ojson{{"type", "eval"}, {"id", m.id}, {"structure", m.structure.vec()}};
          },
          [](const Result& m) {
            return ojson{{"type", "result"}, {"id", m.id}, {"fitness", m.fitness}};
          },
          [](const ErrorReply& m) {
            return ojson{{"type", "error"}, {"id", m.id}, {"message", m.message}};
          },
          [](const Bye&) { return ojson{{"type", "bye"}}; },
      },
      message);
  return doc.dump();
}

Message decode(std::string_view line) {
  ojson doc;
  try {
    doc = ojson::parse(line);
  } catch (const ojson::parse_error& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
  if (!doc.is_object()) throw ProtocolError("message must be a JSON object");
  const ojson& type = field(doc, "type");
  if (!type.is_string()) throw ProtocolError("'type' must be a string");
  const std::string t = type.get<std::string>();

  if (t == "hello") {
    const ojson& v = field(doc, "version");
    if (!v.is_number_integer()) throw ProtocolError("'version' must be an integer");
    return Hello{v.get<int>()};
  }
  if (t == "descriptor") {
    Descriptor m;
    EvaluatorDescriptor& d = m.descriptor;
    const ojson& name = field(doc, "name");
    if (!name.is_string()) throw ProtocolError("'name' must be a string");
    d.name = name.get<std::string>();
    d.deterministic = bool_field(doc, "deterministic");
    d.concurrent_safe = bool_field(doc, "concurrent_safe");
    const ojson& len = field(doc, "expected_vector_length");
    if (!len.is_number_integer() || len.get<std::int64_t>() < 1) {
      throw ProtocolError("'expected_vector_length' must be a positive integer");
    }
    d.expected_vector_length = len.get<std::int64_t>();
    const ojson& range = field(doc, "value_range");
    if (!range.is_array() || range.size() != 2) {
      throw ProtocolError("'value_range' must be [lo, hi]");
    }
    d.value_lo = number_field(range[0], "value_range");
    d.value_hi = number_field(range[1], "value_range");
    return m;
  }
  if (t == "eval") {
    Eval m;
    m.id = id_of(doc);
    const ojson& s = field(doc, "structure");
    if (!s.is_array()) throw ProtocolError("'structure' must be a list of integers");
    std::vector<std::int64_t> values;
    for (const auto& x : s) {
      if (!x.is_number_integer()) throw ProtocolError("'structure' entries must be integers");
      values.push_back(x.get<std::int64_t>());
    }
    m.structure = StructureVector(std::move(values));
    return m;
  }
  if (t == "result") {
    return Result{id_of(doc), number_field(field(doc, "fitness"), "fitness")};
  }
  if (t == "error") {
    const ojson& msg = field(doc, "message");
    if (!msg.is_string()) throw ProtocolError("'message' must be a string");
    return ErrorReply{id_of(doc), msg.get<std::string>()};
  }
  if (t == "bye") return Bye{};
  throw ProtocolError("unknown message type '" + t + "'");
}

std::uint64_t serve(LineChannel& channel, const EvaluatorDescriptor& descriptor,
                    const ServeFn& fn) {
  std::uint64_t evals = 0;
  for (;;) {
    std::string line;
    try {
      line = channel.read_line(std::chrono::milliseconds(0));
    } catch (const TransportError&) {
      return evals;
    }
    if (line.empty()) continue;
    Message msg;
    try {
      msg = decode(line);
    } catch (const ProtocolError& e) {
      channel.write_line(encode(ErrorReply{0, e.what()}));
      continue;
    }
    if (std::holds_alternative<Bye>(msg)) return evals;
    if (const auto* hello = std::get_if<Hello>(&msg)) {
      if (hello->version != kVersion) {
        channel.write_line(encode(ErrorReply{0, "unsupported protocol version " +
                                                    std::to_string(hello->version)}));
      } else {
        channel.write_line(encode(Descriptor{descriptor}));
      }
      continue;
    }
    if (const auto* eval = std::get_if<Eval>(&msg)) {
      ++evals;
      if (static_cast<std::int64_t>(eval->structure.size()) !=
          descriptor.expected_vector_length) {
        channel.write_line(encode(ErrorReply{
            eval->id, "expected " + std::to_string(descriptor.expected_vector_length) +
                          " entries, got " + std::to_string(eval->structure.size())}));
        continue;
      }
      try {
        channel.write_line(encode(Result{eval->id, fn(eval->structure)}));
      } catch (const TransportError&) {
        throw;
      } catch (const std::exception& e) {
        channel.write_line(encode(ErrorReply{eval->id, e.what()}));
      }
      continue;
    }
    channel.write_line(encode(ErrorReply{0, "unexpected message from client"}));
  }
}

}  // namespace chanprune::protocol
