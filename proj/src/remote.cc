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

#include "chanprune/remote.h"

#include <unordered_map>

#include "chanprune/error.h"
#include "chanprune/protocol.h"

namespace chanprune {

RemoteEvaluator::RemoteEvaluator(std::unique_ptr<LineChannel> channel, RemoteOptions options)
    : channel_(std::move(channel)), options_(options) {
  channel_->write_line(protocol::encode(protocol::Hello{}));
  protocol::Message reply = protocol::decode(channel_->read_line(options_.handshake_timeout));
  if (const auto* err = std::get_if<protocol::ErrorReply>(&reply)) {
    throw ProtocolError("server rejected handshake: " + err->message);
  }
  const auto* d = std::get_if<protocol::Descriptor>(&reply);
  if (d == nullptr) throw ProtocolError("expected a descriptor in reply to hello");
  desc_ = d->descriptor;
  if (options_.expected_vector_length &&
      *options_.expected_vector_length != desc_.expected_vector_length) {
    throw ValidationError("evaluator '" + desc_.name + "' expects vectors of length " +
                          std::to_string(desc_.expected_vector_length) +
                          ", search space has " +
                          std::to_string(*options_.expected_vector_length));
  }
}

RemoteEvaluator::~RemoteEvaluator() {
  try {
    shutdown();
  } catch (...) {
  }
}

void RemoteEvaluator::shutdown() {
  if (!channel_) return;
  if (!broken_) {
    try {
      channel_->write_line(protocol::encode(protocol::Bye{}));
    } catch (const TransportError&) {
    }
  }
  channel_->close();
  channel_.reset();
  broken_ = true;
}

void RemoteEvaluator::check_usable() const {
  if (broken_ || !channel_) throw TransportError("remote evaluator connection is closed");
}

void RemoteEvaluator::send_eval(std::uint64_t id, const StructureVector& s) {
  try {
    channel_->write_line(protocol::encode(protocol::Eval{id, s}));
  } catch (const TransportError&) {
    broken_ = true;
    throw;
  }
}

std::pair<std::uint64_t, FitnessValue> RemoteEvaluator::receive_one() {
  protocol::Message reply;
  try {
    reply = protocol::decode(channel_->read_line(options_.timeout));
  } catch (const EvaluatorError&) {
    broken_ = true;
    throw;
  }
  if (const auto* r = std::get_if<protocol::Result>(&reply)) {
    return {r->id, FitnessValue(r->fitness)};
  }
  if (const auto* e = std::get_if<protocol::ErrorReply>(&reply)) {
    throw EvaluatorError("evaluator '" + desc_.name + "' failed on request " +
                         std::to_string(e->id) + ": " + e->message);
  }
  broken_ = true;
  throw ProtocolError("unexpected message while waiting for a result");
}

FitnessValue RemoteEvaluator::evaluate(const StructureVector& s) {
  check_usable();
  if (static_cast<std::int64_t>(s.size()) != desc_.expected_vector_length) {
    throw ValidationError("structure length " + std::to_string(s.size()) +
                          " does not match evaluator length " +
                          std::to_string(desc_.expected_vector_length));
  }
  const std::uint64_t id = next_id_++;
  send_eval(id, s);
  auto [got, value] = receive_one();
  if (got != id) {
    broken_ = true;
    throw ProtocolError("reply id " + std::to_string(got) + " does not match request " +
                        std::to_string(id));
  }
  return value;
}

std::vector<FitnessValue> RemoteEvaluator::evaluate_batch(
    std::span<const StructureVector> batch) {
  if (!options_.pipeline || !desc_.concurrent_safe || batch.size() < 2) {
    return Evaluator::evaluate_batch(batch);
  }
  check_usable();
  for (const auto& s : batch) {
    if (static_cast<std::int64_t>(s.size()) != desc_.expected_vector_length) {
      throw ValidationError("structure length " + std::to_string(s.size()) +
                            " does not match evaluator length " +
                            std::to_string(desc_.expected_vector_length));
    }
  }
  const std::uint64_t first = next_id_;
  for (const auto& s : batch) send_eval(next_id_++, s);
  std::unordered_map<std::uint64_t, double> answers;
  try {
    while (answers.size() < batch.size()) {
      auto [id, value] = receive_one();
      if (id < first || id >= first + batch.size() || answers.contains(id)) {
        throw ProtocolError("unexpected or duplicate reply id " + std::to_string(id));
      }
      answers.emplace(id, value.value());
    }
  } catch (const EvaluatorError&) {
    // Replies to the rest of the batch may still be in flight.
    broken_ = true;
    throw;
  }
  std::vector<FitnessValue> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) out.emplace_back(answers.at(first + i));
  return out;
}

std::shared_ptr<RemoteEvaluator> spawn_remote(const std::string& command,
                                              RemoteOptions options) {
  return std::make_shared<RemoteEvaluator>(std::make_unique<ChildProcessChannel>(command),
                                           options);
}

std::shared_ptr<RemoteEvaluator> connect_remote(const Endpoint& endpoint,
                                                RemoteOptions options) {
  return std::make_shared<RemoteEvaluator>(connect_tcp(endpoint, options.connect_retries),
                                           options);
}

}  // namespace chanprune
