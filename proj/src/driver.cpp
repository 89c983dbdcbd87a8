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

#include "pds/driver.hpp"

#include <unistd.h>

#include <charconv>

#include "net.hpp"
#include "pds/error.hpp"

namespace pds {

namespace {

[[noreturn]] void unreachable(const std::string& what) {
  throw Error(ErrorCode::kDriverUnreachable, what);
}

}  // namespace

int64_t EmbeddedDriver::advance_clock(int64_t delta_ms) {
  if (LogicalClock* clock = service_->logical_clock()) return clock->advance(delta_ms);
  if (delta_ms != 0) throw Error(ErrorCode::kInvalidArgument, "store runs on the wall clock");
  return service_->clock().now_ms();
}

std::pair<std::string, uint16_t> parse_address(std::string_view address) {
  std::size_t colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::kInvalidArgument, "address must be host:port");
  }
  unsigned port = 0;
  std::string_view digits = address.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port == 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "bad port in '" + std::string(address) + "'");
  }
  return {std::string(address.substr(0, colon)), static_cast<uint16_t>(port)};
}

RemoteDriver::RemoteDriver(const std::string& host, uint16_t port, const Role& session_role) {
  std::string error;
  fd_ = net::connect_tcp(host, port, &error);
  if (fd_ < 0) unreachable(error);
  channel_ = std::make_unique<LineChannel>(fd_);
  std::string status;
  try {
    status = round_trip("HELLO " + session_role.to_string()).first;
  } catch (const Error&) {
    ::close(fd_);
    throw;
  }
  if (status != "OK 0") {
    ::close(fd_);
    unreachable("handshake refused: " + status);
  }
}

RemoteDriver::~RemoteDriver() {
  if (fd_ >= 0) {
    try {
      channel_->write_all("QUIT\n");
    } catch (const Error&) {
    }
    ::close(fd_);
  }
}

std::pair<std::string, std::vector<std::string>> RemoteDriver::round_trip(const std::string& line) {
  channel_->write_all(line + "\n");
  std::string status;
  if (!channel_->read_line(&status)) unreachable("connection closed by server");
  std::vector<std::string> body;
  std::optional<std::size_t> n;
  try {
    n = response_body_size(status);
  } catch (const Error&) {
    unreachable("protocol error: " + status);
  }
  if (n) {
    body.resize(*n);
    for (auto& b : body) {
      if (!channel_->read_line(&b)) unreachable("connection closed mid-response");
    }
  }
  return {std::move(status), std::move(body)};
}

QueryResponse RemoteDriver::execute(const Role& role, const GdprQuery& query) {
  std::lock_guard lock(mu_);
  auto [status, body] = round_trip(format_request(role, query));
  return parse_response(role, query, status, body);
}

std::string RemoteDriver::admin_value(const std::string& line) {
  std::lock_guard lock(mu_);
  auto [status, body] = round_trip(line);
  if (status != "OK 1" || body.size() != 1) {
    ErrorCode code = ErrorCode::kDriverUnreachable;
    std::string_view rest = status;
    if (rest.substr(0, 4) == "ERR ") {
      rest.remove_prefix(4);
      parse_error_code(rest.substr(0, rest.find(' ')), &code);
    }
    throw Error(code, line + ": " + status);
  }
  return body[0];
}

SpaceStats RemoteDriver::space_stats() { return parse_space_stats(admin_value("STATS")); }

std::size_t RemoteDriver::reap() { return std::stoull(admin_value("REAP")); }

int64_t RemoteDriver::advance_clock(int64_t delta_ms) {
  return std::stoll(admin_value("TICK " + std::to_string(delta_ms)));
}

}  // namespace pds
