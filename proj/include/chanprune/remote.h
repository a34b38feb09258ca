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

#ifndef CHANPRUNE_REMOTE_H_
#define CHANPRUNE_REMOTE_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "chanprune/fitness.h"
#include "chanprune/transport.h"

namespace chanprune {

struct RemoteOptions {
  // Per evaluation. Accuracy evaluators run a forward pass over thousands of
  // samples, hence the generous default.
  std::chrono::milliseconds timeout{300'000};
  std::chrono::milliseconds handshake_timeout{60'000};
  // Checked against the server descriptor during the handshake.
  std::optional<std::int64_t> expected_vector_length;
  // Keep several ids in flight for a batch when the server declares itself
  // concurrent-safe.
  bool pipeline = true;
  // TCP connect attempts beyond the first.
  int connect_retries = 0;
};

// Client side of the evaluation protocol.
class RemoteEvaluator : public Evaluator {
 public:
  // Performs the handshake. Throws TransportError, TimeoutError,
  // ProtocolError, or ValidationError on a length mismatch.
  RemoteEvaluator(std::unique_ptr<LineChannel> channel, RemoteOptions options = {});
  // Sends "bye" if the connection is still usable, then closes it.
  ~RemoteEvaluator() override;

  RemoteEvaluator(const RemoteEvaluator&) = delete;
  RemoteEvaluator& operator=(const RemoteEvaluator&) = delete;

  const EvaluatorDescriptor& descriptor() const override { return desc_; }
  FitnessValue evaluate(const StructureVector& s) override;
  std::vector<FitnessValue> evaluate_batch(std::span<const StructureVector> batch) override;

  void shutdown();
  std::uint64_t requests_sent() const { return next_id_ - 1; }

 private:
  void send_eval(std::uint64_t id, const StructureVector& s);
  std::pair<std::uint64_t, FitnessValue> receive_one();
  void check_usable() const;

  std::unique_ptr<LineChannel> channel_;
  RemoteOptions options_;
  EvaluatorDescriptor desc_;
  std::uint64_t next_id_ = 1;
  bool broken_ = false;
};

// Spawns `command` as a child process speaking the protocol on stdio.
std::shared_ptr<RemoteEvaluator> spawn_remote(const std::string& command,
                                              RemoteOptions options = {});
std::shared_ptr<RemoteEvaluator> connect_remote(const Endpoint& endpoint,
                                                RemoteOptions options = {});

}  // namespace chanprune

#endif  // CHANPRUNE_REMOTE_H_
