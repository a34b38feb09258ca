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

#ifndef CHANPRUNE_TRANSPORT_H_
#define CHANPRUNE_TRANSPORT_H_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace chanprune {

// Newline-delimited byte stream. Read timeouts <= 0 block indefinitely.
class LineChannel {
 public:
  virtual ~LineChannel() = default;

  // Appends '\n'. Throws TransportError.
  virtual void write_line(std::string_view line) = 0;
  // Line without its terminator. Throws TimeoutError, or TransportError at
  // end of stream.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
  virtual void close() = 0;
};

// Buffered channel over a pair of file descriptors, which it owns. The two
// may be the same descriptor (sockets).
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd);
  ~FdChannel() override;

  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void write_line(std::string_view line) override;
  std::string read_line(std::chrono::milliseconds timeout) override;
  void close() override;

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

// Runs `/bin/sh -c command` with its stdin/stdout connected to the channel;
// stderr is inherited. Closing the channel closes the pipes and reaps the
// child, killing it if it does not exit within a few seconds.
class ChildProcessChannel : public LineChannel {
 public:
  explicit ChildProcessChannel(const std::string& command);
  ~ChildProcessChannel() override;

  void write_line(std::string_view line) override { io_->write_line(line); }
  std::string read_line(std::chrono::milliseconds timeout) override {
    return io_->read_line(timeout);
  }
  void close() override;

  pid_t pid() const { return pid_; }
  // Exit status once reaped, -1 before that or if killed by a signal.
  int exit_status() const { return exit_status_; }

 private:
  std::unique_ptr<FdChannel> io_;
  pid_t pid_ = -1;
  int exit_status_ = -1;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

// "host:port" or ":port" (localhost). Throws ValidationError.
Endpoint parse_endpoint(std::string_view text);

// Makes 1 + retries connection attempts before throwing TransportError.
std::unique_ptr<LineChannel> connect_tcp(
    const Endpoint& endpoint, int retries = 0,
    std::chrono::milliseconds retry_delay = std::chrono::milliseconds(200));

class TcpListener {
 public:
  // Port 0 picks an ephemeral port.
  explicit TcpListener(std::uint16_t port = 0,
                       const std::string& host = "127.0.0.1");
  ~TcpListener();

  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  std::unique_ptr<LineChannel> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace chanprune

#endif  // CHANPRUNE_TRANSPORT_H_
