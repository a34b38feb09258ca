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

// Loopback evaluator: fitness = -sum |s_i|. Serves on stdio or TCP.

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "chanprune/protocol.h"
#include "chanprune/transport.h"

int main(int argc, char** argv) {
  CLI::App app{"Protocol loopback server computing -sum|s_i|"};
  std::int64_t length = 1;
  std::string listen = "stdio";
  std::string log_path;
  bool concurrent = false;
  bool fail_all = false;
  app.add_option("--length", length, "Expected structure length")->required();
  app.add_option("--listen", listen, "stdio or a TCP port");
  app.add_option("--log", log_path, "Append every evaluated structure to this file");
  app.add_flag("--concurrent", concurrent, "Declare concurrent_safe (enables pipelining)");
  app.add_flag("--fail", fail_all, "Answer every eval with an error");
  CLI11_PARSE(app, argc, argv);

  chanprune::EvaluatorDescriptor desc;
  desc.name = "echo";
  desc.deterministic = true;
  desc.concurrent_safe = concurrent;
  desc.expected_vector_length = length;
  desc.value_lo = -1e18;
  desc.value_hi = 0.0;

  std::unique_ptr<std::ofstream> log;
  if (!log_path.empty()) log = std::make_unique<std::ofstream>(log_path, std::ios::app);

  auto fn = [&](const chanprune::StructureVector& s) -> double {
    if (log) *log << s.to_string() << std::endl;
    if (fail_all) throw std::runtime_error("configured to fail");
    double total = 0.0;
    for (std::int64_t x : s) total += static_cast<double>(x < 0 ? -x : x);
    return -total;
  };

  try {
    if (listen == "stdio") {
      chanprune::FdChannel channel(dup(STDIN_FILENO), dup(STDOUT_FILENO));
      chanprune::protocol::serve(channel, desc, fn);
    } else {
      chanprune::TcpListener listener(static_cast<std::uint16_t>(std::stoi(listen)));
      std::cerr << "listening on " << listener.port() << std::endl;
      auto channel = listener.accept();
      chanprune::protocol::serve(*channel, desc, fn);
    }
  } catch (const std::exception& e) {
    std::cerr << "echo server: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
