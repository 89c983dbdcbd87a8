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

#include "pds/server.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>

#include "net.hpp"
#include "pds/error.hpp"
#include "pds/wire.hpp"

namespace pds {

namespace {

std::vector<std::string> err(ErrorCode code, const std::string& message) {
  return {"ERR " + std::string(error_code_name(code)) + " " + message};
}

std::vector<std::string> ok_value(const std::string& value) { return {"OK 1", value}; }

}  // namespace

WireServer::WireServer(std::shared_ptr<GdprService> service, const std::string& host,
                       uint16_t port)
    : service_(std::move(service)) {
  std::string error;
  listen_fd_ = net::listen_tcp(host, port, &port_, &error);
  if (listen_fd_ < 0) throw Error(ErrorCode::kStorageFailure, error);
  acceptor_ = std::thread([this] { accept_loop(); });
}

WireServer::~WireServer() { stop(); }

void WireServer::wait() {
  while (!stopping_.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
}

void WireServer::stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable() && acceptor_.get_id() != std::this_thread::get_id()) acceptor_.join();
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> sessions;
  {
    std::lock_guard lock(sessions_mu_);
    for (int fd : session_fds_) ::shutdown(fd, SHUT_RDWR);
    sessions.swap(sessions_);
  }
  for (auto& t : sessions) t.join();
}

void WireServer::accept_loop() {
  while (!stopping_.load()) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_.load()) return;
      continue;
    }
    net::set_nodelay(fd);
    std::lock_guard lock(sessions_mu_);
    if (stopping_.load()) {
      ::close(fd);
      return;
    }
    session_fds_.push_back(fd);
    sessions_.emplace_back([this, fd] { serve(fd); });
  }
}

void WireServer::serve(int fd) {
  LineChannel channel(fd);
  bool hello = false;
  bool quit = false;
  std::string line;
  std::string out;
  try {
    while (!quit && channel.read_line(&line)) {
      out.clear();
      for (const auto& l : handle_line(line, &hello, &quit)) out.append(l).push_back('\n');
      channel.write_all(out);
    }
  } catch (const Error&) {
  }
  std::lock_guard lock(sessions_mu_);
  session_fds_.erase(std::remove(session_fds_.begin(), session_fds_.end(), fd),
                     session_fds_.end());
  ::close(fd);
}

std::vector<std::string> WireServer::handle_line(const std::string& line, bool* hello_seen,
                                                 bool* quit) {
  std::string_view verb = std::string_view(line).substr(0, line.find(' '));
  std::string_view arg = verb.size() < line.size() ? std::string_view(line).substr(verb.size() + 1)
                                                   : std::string_view();
  if (verb == "HELLO") {
    if (!parse_role(arg)) return err(ErrorCode::kMalformed, "bad role");
    *hello_seen = true;
    return {"OK 0"};
  }
  if (verb == "QUIT") {
    *quit = true;
    return {"OK 0"};
  }
  if (!*hello_seen) return err(ErrorCode::kMalformed, "HELLO must come first");
  if (verb == "REQ") {
    try {
      WireRequest req = parse_request(line);
      return format_response(service_->execute(req.role, req.query));
    } catch (const Error& e) {
      return err(e.code(), e.what());
    }
  }
  if (verb == "TICK") {
    int64_t delta = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), delta);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      return err(ErrorCode::kMalformed, "TICK needs an integer");
    }
    if (LogicalClock* clock = service_->logical_clock()) {
      return ok_value(std::to_string(clock->advance(delta)));
    }
    if (delta != 0) return err(ErrorCode::kInvalidArgument, "server runs on the wall clock");
    return ok_value(std::to_string(service_->clock().now_ms()));
  }
  if (verb == "CLOCK") return ok_value(service_->logical_clock() ? "logical" : "wall");
  if (verb == "REAP") return ok_value(std::to_string(service_->reap()));
  if (verb == "STATS") return ok_value(format_space_stats(service_->store().space_stats()));
  return err(ErrorCode::kMalformed, "unknown command");
}

}  // namespace pds
