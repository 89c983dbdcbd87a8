// Copyright 2026 The pdstore Authors.
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

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pds/service.hpp"

namespace pds {

// TCP front end for a service; one thread per session.
class WireServer {
 public:
  // port 0 picks an ephemeral port. Throws Error(kStorageFailure) if the
  // socket cannot be bound.
  WireServer(std::shared_ptr<GdprService> service, const std::string& host, uint16_t port);
  ~WireServer();

  WireServer(const WireServer&) = delete;
  WireServer& operator=(const WireServer&) = delete;

  uint16_t port() const { return port_; }

  // Blocks until stop() is called from another thread.
  void wait();
  void stop();

  // Answers one protocol line. Exposed for tests.
  std::vector<std::string> handle_line(const std::string& line, bool* hello_seen, bool* quit);

 private:
  void accept_loop();
  void serve(int fd);

  std::shared_ptr<GdprService> service_;
  int listen_fd_ = -1;
  uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;

  std::mutex sessions_mu_;
  std::vector<int> session_fds_;
  std::vector<std::thread> sessions_;
};

}  // namespace pds
