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

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

#include "pds/query.hpp"
#include "pds/service.hpp"
#include "pds/wire.hpp"

namespace pds {

// What the benchmark harness needs from a backend.
class BackendDriver {
 public:
  virtual ~BackendDriver() = default;

  virtual QueryResponse execute(const Role& role, const GdprQuery& query) = 0;
  virtual SpaceStats space_stats() = 0;
  // One full reaper pass at the backend's current time; returns the count.
  virtual std::size_t reap() = 0;
  // Advances a logical backend clock and returns the new reading. Throws
  // Error(kInvalidArgument) when the backend runs on the wall clock.
  virtual int64_t advance_clock(int64_t delta_ms) = 0;
  int64_t now_ms() { return advance_clock(0); }
  virtual bool logical_clock() = 0;
  virtual std::string name() const = 0;
};

class EmbeddedDriver final : public BackendDriver {
 public:
  explicit EmbeddedDriver(std::shared_ptr<GdprService> service) : service_(std::move(service)) {}

  QueryResponse execute(const Role& role, const GdprQuery& query) override {
    return service_->execute(role, query);
  }
  SpaceStats space_stats() override { return service_->store().space_stats(); }
  std::size_t reap() override { return service_->reap(); }
  int64_t advance_clock(int64_t delta_ms) override;
  bool logical_clock() override { return service_->logical_clock() != nullptr; }
  std::string name() const override { return "embedded"; }

  GdprService& service() { return *service_; }

 private:
  std::shared_ptr<GdprService> service_;
};

// Speaks the line protocol to a server. One connection, serialized requests.
class RemoteDriver final : public BackendDriver {
 public:
  // Throws Error(kDriverUnreachable).
  RemoteDriver(const std::string& host, uint16_t port, const Role& session_role = Role::controller());
  ~RemoteDriver() override;

  RemoteDriver(const RemoteDriver&) = delete;
  RemoteDriver& operator=(const RemoteDriver&) = delete;

  QueryResponse execute(const Role& role, const GdprQuery& query) override;
  SpaceStats space_stats() override;
  std::size_t reap() override;
  int64_t advance_clock(int64_t delta_ms) override;
  bool logical_clock() override { return admin_value("CLOCK") == "logical"; }
  std::string name() const override { return "remote"; }

 private:
  // Sends one line and collects the status line and body.
  std::pair<std::string, std::vector<std::string>> round_trip(const std::string& line);
  std::string admin_value(const std::string& line);

  std::mutex mu_;
  int fd_ = -1;
  std::unique_ptr<LineChannel> channel_;
};

// "host:port" → pair; throws Error(kInvalidArgument).
std::pair<std::string, uint16_t> parse_address(std::string_view address);

}  // namespace pds
