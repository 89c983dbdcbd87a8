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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pds/query.hpp"

namespace pds {

// What the oracle predicts for one query. Record and metadata results are
// row slots, valid only until the next apply or reap.
struct Expectation {
  ErrorCode code = ErrorCode::kOk;
  PayloadKind kind = PayloadKind::kNone;
  std::vector<std::size_t> slots;
  uint64_t count = 0;
  std::vector<AuditEntry> logs;
  DeletionStatus deletion;
  std::optional<FeatureReport> features;

  bool ok() const { return code == ErrorCode::kOk; }
};

// Naive single-threaded model of the reference service: an unsorted row
// list with linear scans, the shared authorization table, and its own audit
// trail. Selection and lifecycle rules are written out here independently
// of the store.
class Oracle {
 public:
  explicit Oracle(bool auditing = true) : auditing_(auditing) {}

  // Expected GET-SYSTEM-FEATURES answer; unset accepts any report.
  void set_features(FeatureReport features) { features_ = features; }

  // `window_ms` > 0 means the backend clock may have read anything in
  // [now_ms, now_ms + window_ms] while serving the call: a created row gets
  // that creation uncertainty, and removals of rows that may already have
  // expired are flagged as ambiguous.
  Expectation apply(const Role& role, const GdprQuery& query, int64_t now_ms,
                    int64_t window_ms = 0);

  // Erases every row whose latest possible expiry is <= now_ms as one
  // audited pass.
  std::size_t reap(int64_t now_ms);

  // Exact comparison of a response with the expectation from the latest
  // apply. On mismatch, `why` (if given) names the first difference.
  bool check(const Expectation& expected, const QueryResponse& response,
             std::string* why = nullptr);

  // Record-level comparison against the current row of the same key.
  bool same_as_row(const PersonalRecord& record) const;

  const PersonalRecord* find(std::string_view key) const;

  // Selection predicate for the query's dimension at now_ms, optionally
  // confined to records of `owner`.
  static bool satisfies(const PersonalRecord& record, const GdprQuery& query,
                        const std::string* owner, int64_t now_ms);

  // True if some row the query addresses (by key, user, purpose or
  // partner) may expire within [lo_ms, hi_ms].
  bool expiry_within(const GdprQuery& query, int64_t lo_ms, int64_t hi_ms) const;
  // True if the row was created while the clock moved and may expire within
  // [lo_ms, hi_ms]; its metadata may then differ from the backend's.
  bool uncertain(std::string_view key, int64_t lo_ms, int64_t hi_ms) const;
  // True if the oracle erased `key` while the backend may have seen it
  // expired instead.
  bool ambiguous_erasure(std::string_view key) const;
  std::size_t size() const { return rows_.size() - dead_; }
  const std::vector<AuditEntry>& audit() const { return audit_; }

 private:
  struct Row {
    PersonalRecord record;
    int64_t slack_ms = 0;
    uint64_t mark = 0;
  };
  // Compact per-row digest scanned before touching the row itself. Token
  // sets are folded into 64-bit masks, so a clear bit is a definite miss.
  struct Digest {
    int64_t expiry_ms = 0;
    int64_t slack_ms = 0;
    uint64_t usr = 0;
    uint64_t pur = 0;
    uint64_t obj = 0;
    uint64_t shr = 0;
    bool live = true;
  };
  struct Erased {
    uint64_t seq = 0;
    int64_t erased_at_ms = 0;
    int64_t reference_ms = 0;
    bool ambiguous = false;
  };
  struct Removal {
    std::string key;
    int64_t reference_ms = 0;
    bool ambiguous = false;
  };

  Expectation execute(const Role& role, const GdprQuery& q, int64_t now_ms,
                      std::vector<Removal>* removed);
  std::vector<std::size_t> scan(const GdprQuery& q, const std::string* owner,
                                int64_t now_ms) const;
  void erase_row(const std::string& key);
  void refresh(std::size_t slot);
  void maybe_compact();
  // kNo and kYes are exact; kMaybe needs the full predicate.
  enum { kNo, kMaybe, kYes };
  int prefilter(const Digest& d, const GdprQuery& q, uint64_t token_hash, uint64_t token_bit,
                uint64_t owner_hash, bool owned, int64_t now_ms) const;
  void record_audit(const Role& role, std::string op, ErrorCode outcome, uint64_t count,
                    int64_t now_ms, const std::vector<Removal>& removed, int64_t erased_at_ms);

  bool auditing_;
  int64_t window_ms_ = 0;
  std::optional<FeatureReport> features_;
  std::vector<Row> rows_;
  std::vector<Digest> digests_;
  // Erased rows stay in place until compaction, so rows keep creation order.
  std::size_t dead_ = 0;
  std::unordered_map<std::string, std::size_t> slot_;
  std::vector<AuditEntry> audit_;
  uint64_t next_seq_ = 1;
  std::unordered_set<std::string> created_;
  std::unordered_map<std::string, Erased> erased_;
  uint64_t epoch_ = 0;
};

}  // namespace pds
