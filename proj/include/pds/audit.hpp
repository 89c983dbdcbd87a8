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
#include <cstdio>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pds/clock.hpp"
#include "pds/error.hpp"
#include "pds/role.hpp"
#include "pds/store.hpp"

namespace pds {

struct AuditEntry {
  uint64_t seq = 0;
  int64_t timestamp_ms = 0;
  std::string role;
  std::string actor;
  std::string op;
  std::string selector;
  std::string outcome;  // OK, DENIED or an error code name
  uint64_t count = 0;

  bool operator==(const AuditEntry&) const = default;
};

// `seq|timestamp_ms|role|actor|op|selector|outcome|count`. '%', '|' and
// control characters inside fields are percent-escaped.
std::string format_audit_line(const AuditEntry& entry);
// Throws Error(kMalformed).
AuditEntry parse_audit_line(std::string_view line);

struct DeletionStatus {
  bool erased = false;
  std::optional<uint64_t> deletion_seq;
  std::optional<int64_t> latency_ms;

  bool operator==(const DeletionStatus&) const = default;
};

// Append-only, totally ordered trail of every executed query plus reaper
// passes. Entries are numbered 1, 2, ... without gaps.
class AuditLog {
 public:
  struct Options {
    bool enabled = true;
    // Empty: memory only. Otherwise each entry is written and flushed here
    // before append returns; existing entries are reloaded at open.
    std::filesystem::path file;
  };

  AuditLog(Options options, std::shared_ptr<Clock> clock);
  ~AuditLog();

  AuditLog(const AuditLog&) = delete;
  AuditLog& operator=(const AuditLog&) = delete;

  bool enabled() const { return options_.enabled; }

  // Stamps seq and timestamp. Erasures, if any, are linked to the new seq
  // for verify_deletion. Returns the seq, or 0 when auditing is disabled.
  // Throws Error(kStorageFailure) if the write fails.
  uint64_t append(const Role& role, std::string op, std::string selector,
                  ErrorCode outcome, uint64_t count,
                  const std::vector<Erasure>& erasures = {});

  // Entries with timestamp in [start_ms, end_ms], seq order.
  // Throws Error(kInvalidRange) when start_ms > end_ms.
  std::vector<AuditEntry> get_system_logs(int64_t start_ms, int64_t end_ms) const;

  std::size_t size() const;
  std::vector<AuditEntry> entries() const;

  void note_created(std::string_view key);
  void note_erasures(const std::vector<Erasure>& erasures, uint64_t seq);

  // `present` says whether the store still holds the key.
  // Throws Error(kUnknownKey) for keys never created nor erased.
  DeletionStatus verify_deletion(std::string_view key, bool present) const;

 private:
  void note_erasures_locked(const std::vector<Erasure>& erasures, uint64_t seq);

  struct ErasureEvent {
    uint64_t seq = 0;
    int64_t erased_at_ms = 0;
    int64_t reference_ms = 0;
  };

  Options options_;
  std::shared_ptr<Clock> clock_;

  mutable std::mutex mu_;
  std::vector<AuditEntry> entries_;
  uint64_t next_seq_ = 1;
  std::FILE* file_ = nullptr;
  std::unordered_set<std::string> created_;
  std::unordered_map<std::string, ErasureEvent> erasures_;
};

}  // namespace pds
