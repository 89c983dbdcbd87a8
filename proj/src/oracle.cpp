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

#include "pds/oracle.hpp"

#include <algorithm>

#include "pds/policy.hpp"

namespace pds {

namespace {

Expectation failure(ErrorCode code) {
  Expectation e;
  e.code = code;
  return e;
}

Expectation count_of(uint64_t n) {
  Expectation e;
  e.kind = PayloadKind::kCount;
  e.count = n;
  return e;
}

bool has(const TokenSet& set, std::string_view token) { return set.find(token) != set.end(); }

uint64_t touched(const Expectation& e) {
  switch (e.kind) {
    case PayloadKind::kRecords:
    case PayloadKind::kMetadata: return e.slots.size();
    case PayloadKind::kCount: return e.count;
    case PayloadKind::kLogs: return e.logs.size();
    case PayloadKind::kDeletion: return 1;
    case PayloadKind::kFeatures: return std::size(kAllCapabilities);
    case PayloadKind::kNone: return 0;
  }
  return 0;
}

uint64_t token_hash(std::string_view token) { return std::hash<std::string_view>{}(token); }

uint64_t token_bit(std::string_view token) { return uint64_t{1} << (token_hash(token) & 63); }

uint64_t mask_of(const TokenSet& set) {
  uint64_t mask = 0;
  for (const std::string& token : set) mask |= token_bit(token);
  return mask;
}

bool fail(std::string* why, std::string text) {
  if (why) *why = std::move(text);
  return false;
}

}  // namespace

const PersonalRecord* Oracle::find(std::string_view key) const {
  auto it = slot_.find(std::string(key));
  return it == slot_.end() ? nullptr : &rows_[it->second].record;
}

bool Oracle::same_as_row(const PersonalRecord& record) const {
  const PersonalRecord* row = find(record.key);
  return row != nullptr && row->same_content(record);
}

bool Oracle::satisfies(const PersonalRecord& r, const GdprQuery& q, const std::string* owner,
                       int64_t now_ms) {
  if (owner && r.meta.usr != *owner) return false;
  bool expired = r.created_at_ms + r.meta.ttl * 1000 <= now_ms;
  if (q.dimension == Dimension::kTtl) return expired;
  if (expired) return false;
  switch (q.dimension) {
    case Dimension::kKey: return r.key == q.token;
    case Dimension::kUsr: return r.meta.usr == q.token;
    case Dimension::kPur: return has(r.meta.pur, q.token) && !has(r.meta.obj, q.token);
    case Dimension::kObj: return !has(r.meta.obj, q.token);
    case Dimension::kDec: return !has(r.meta.obj, kAutomatedObjection);
    case Dimension::kShr: return has(r.meta.shr, q.token);
    default: return false;
  }
}

void Oracle::refresh(std::size_t slot) {
  const Row& row = rows_[slot];
  const Metadata& m = row.record.meta;
  digests_[slot] = {row.record.expiry_ms(), row.slack_ms, token_hash(m.usr),
                    mask_of(m.pur), mask_of(m.obj), mask_of(m.shr)};
}

int Oracle::prefilter(const Digest& d, const GdprQuery& q, uint64_t token, uint64_t bit,
                      uint64_t owner_hash, bool owned, int64_t now_ms) const {
  if (!d.live || (owned && d.usr != owner_hash)) return kNo;
  bool expired = d.expiry_ms <= now_ms;
  if (q.dimension == Dimension::kTtl) return expired && !owned ? kYes : expired ? kMaybe : kNo;
  if (expired) return kNo;
  switch (q.dimension) {
    case Dimension::kUsr: return d.usr == token ? kMaybe : kNo;
    case Dimension::kPur: return (d.pur & bit) != 0 ? kMaybe : kNo;
    case Dimension::kShr: return (d.shr & bit) != 0 ? kMaybe : kNo;
    case Dimension::kObj:
    case Dimension::kDec: return (d.obj & bit) == 0 && !owned ? kYes : kMaybe;
    default: return kMaybe;
  }
}

std::vector<std::size_t> Oracle::scan(const GdprQuery& q, const std::string* owner,
                                      int64_t now_ms) const {
  std::vector<std::size_t> out;
  if (q.dimension == Dimension::kKey) {
    auto it = slot_.find(q.token);
    if (it != slot_.end() && satisfies(rows_[it->second].record, q, owner, now_ms)) {
      out.push_back(it->second);
    }
    return out;
  }
  uint64_t bit = token_bit(q.dimension == Dimension::kDec ? kAutomatedObjection : q.token);
  uint64_t token = token_hash(q.token);
  uint64_t owner_hash = owner ? token_hash(*owner) : 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int verdict = prefilter(digests_[i], q, token, bit, owner_hash, owner != nullptr, now_ms);
    if (verdict == kNo) continue;
    if (verdict == kYes || satisfies(rows_[i].record, q, owner, now_ms)) out.push_back(i);
  }
  return out;
}

bool Oracle::expiry_within(const GdprQuery& q, int64_t lo_ms, int64_t hi_ms) const {
  auto near = [&](const Row& row) {
    return row.record.expiry_ms() + row.slack_ms >= lo_ms && row.record.expiry_ms() <= hi_ms;
  };
  if (q.dimension == Dimension::kKey) {
    auto it = slot_.find(q.token);
    return it != slot_.end() && near(rows_[it->second]);
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Digest& d = digests_[i];
    if (!d.live || d.expiry_ms + d.slack_ms < lo_ms || d.expiry_ms > hi_ms) continue;
    const Row& row = rows_[i];
    const Metadata& m = row.record.meta;
    bool addressed = false;
    switch (q.dimension) {
      case Dimension::kUsr: addressed = m.usr == q.token; break;
      case Dimension::kPur: addressed = has(m.pur, q.token); break;
      case Dimension::kShr: addressed = has(m.shr, q.token) || row.slack_ms > 0; break;
      default: addressed = true; break;
    }
    if (addressed && near(row)) return true;
  }
  return false;
}

bool Oracle::uncertain(std::string_view key, int64_t lo_ms, int64_t hi_ms) const {
  auto it = slot_.find(std::string(key));
  if (it == slot_.end()) return false;
  const Row& row = rows_[it->second];
  return row.slack_ms > 0 && row.record.expiry_ms() + row.slack_ms >= lo_ms &&
         row.record.expiry_ms() <= hi_ms;
}

bool Oracle::ambiguous_erasure(std::string_view key) const {
  auto it = erased_.find(std::string(key));
  return it != erased_.end() && it->second.ambiguous;
}

void Oracle::erase_row(const std::string& key) {
  auto it = slot_.find(key);
  if (it == slot_.end()) return;
  std::size_t i = it->second;
  slot_.erase(it);
  rows_[i] = Row{};
  digests_[i].live = false;
  ++dead_;
}

void Oracle::maybe_compact() {
  if (dead_ < 1024 || dead_ * 2 < rows_.size()) return;
  std::size_t next = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!digests_[i].live) continue;
    if (i != next) {
      rows_[next] = std::move(rows_[i]);
      digests_[next] = digests_[i];
      slot_[rows_[next].record.key] = next;
    }
    ++next;
  }
  rows_.resize(next);
  digests_.resize(next);
  dead_ = 0;
}

Expectation Oracle::apply(const Role& role, const GdprQuery& q, int64_t now_ms,
                          int64_t window_ms) {
  maybe_compact();
  std::vector<Removal> removed;
  window_ms_ = window_ms;
  Expectation e = execute(role, q, now_ms, &removed);
  if (e.ok() && q.family == Family::kCreateRecord) {
    created_.insert(q.record->key);
    std::size_t slot = slot_.at(q.record->key);
    rows_[slot].slack_ms = window_ms;
    refresh(slot);
  }
  for (const Removal& r : removed) erase_row(r.key);
  record_audit(role, q.name(), e.code, e.ok() ? touched(e) : 0, now_ms, removed, now_ms);
  return e;
}

Expectation Oracle::execute(const Role& role, const GdprQuery& q, int64_t now_ms,
                            std::vector<Removal>* removed) {
  if (!is_valid_pair(q.family, q.dimension)) return failure(ErrorCode::kMalformed);
  bool token_dim = q.dimension == Dimension::kKey || q.dimension == Dimension::kPur ||
                   q.dimension == Dimension::kUsr || q.dimension == Dimension::kObj ||
                   q.dimension == Dimension::kShr;
  if (q.family == Family::kCreateRecord) {
    if (!q.record) return failure(ErrorCode::kMalformed);
  } else if (token_dim && !is_valid_token(q.token)) {
    return failure(ErrorCode::kMalformed);
  }

  Decision decision = authorize(role, q);
  if (decision.verdict == Verdict::kDeny) return failure(ErrorCode::kDenied);
  const std::string* owner =
      decision.verdict == Verdict::kAllowFiltered ? &decision.owner : nullptr;
  auto slot = slot_.find(q.token);
  Row* row = slot == slot_.end() ? nullptr : &rows_[slot->second];
  if (owner && q.dimension == Dimension::kKey && row && row->record.meta.usr != *owner) {
    return failure(ErrorCode::kDenied);
  }
  auto key_state = [&]() -> ErrorCode {
    if (!row || (owner && row->record.meta.usr != *owner)) return ErrorCode::kNotFound;
    if (row->record.expiry_ms() <= now_ms) return ErrorCode::kExpired;
    return ErrorCode::kOk;
  };

  switch (q.family) {
    case Family::kCreateRecord: {
      try {
        validate_record(*q.record);
      } catch (const Error& err) {
        return failure(err.code());
      }
      if (slot_.count(q.record->key) > 0) return failure(ErrorCode::kDuplicateKey);
      Row fresh;
      fresh.record = *q.record;
      fresh.record.created_at_ms = now_ms;
      slot_[fresh.record.key] = rows_.size();
      rows_.push_back(std::move(fresh));
      digests_.emplace_back();
      refresh(rows_.size() - 1);
      return count_of(1);
    }
    case Family::kDeleteRecord: {
      if (q.dimension == Dimension::kKey) {
        if (ErrorCode c = key_state(); c != ErrorCode::kOk) return failure(c);
        removed->push_back({q.token, now_ms, row->record.expiry_ms() <= now_ms + window_ms_});
        return count_of(1);
      }
      for (std::size_t i : scan(q, owner, now_ms)) {
        const PersonalRecord& r = rows_[i].record;
        // A row created while the clock moved stays until its latest expiry.
        if (q.dimension == Dimension::kTtl && r.expiry_ms() + rows_[i].slack_ms > now_ms) continue;
        bool expired = r.expiry_ms() <= now_ms;
        removed->push_back(
            {r.key, expired ? r.expiry_ms() : now_ms, r.expiry_ms() <= now_ms + window_ms_});
      }
      return count_of(removed->size());
    }
    case Family::kReadData:
    case Family::kReadMetadata: {
      Expectation e;
      e.kind = q.family == Family::kReadData ? PayloadKind::kRecords : PayloadKind::kMetadata;
      if (q.family == Family::kReadData && role.kind == RoleKind::kRegulator) {
        return failure(ErrorCode::kDenied);
      }
      e.slots = scan(q, owner, now_ms);
      if (q.dimension == Dimension::kKey && e.slots.empty()) return failure(ErrorCode::kNotFound);
      return e;
    }
    case Family::kUpdateData: {
      if (!is_valid_token(q.new_data)) return failure(ErrorCode::kMalformed);
      if (!row) return failure(ErrorCode::kNotFound);
      if (row->record.expiry_ms() <= now_ms) return failure(ErrorCode::kExpired);
      row->record.data = q.new_data;
      return count_of(1);
    }
    case Family::kUpdateMetadata: {
      try {
        Metadata probe;
        probe.usr = "probe";
        apply_edit(q.edit, &probe);
      } catch (const Error& err) {
        return failure(err.code());
      }
      std::vector<std::size_t> targets;
      if (q.dimension == Dimension::kKey) {
        if (ErrorCode c = key_state(); c != ErrorCode::kOk) return failure(c);
        targets.push_back(slot->second);
      } else {
        targets = scan(q, owner, now_ms);
      }
      for (std::size_t i : targets) {
        apply_edit(q.edit, &rows_[i].record.meta);
        refresh(i);
      }
      return count_of(targets.size());
    }
    case Family::kGetSystem: {
      Expectation e;
      if (q.dimension == Dimension::kFeatures) {
        e.kind = PayloadKind::kFeatures;
        e.features = features_;
        return e;
      }
      if (q.range.start_ms > q.range.end_ms) return failure(ErrorCode::kInvalidRange);
      e.kind = PayloadKind::kLogs;
      for (const AuditEntry& a : audit_) {
        if (a.timestamp_ms >= q.range.start_ms && a.timestamp_ms <= q.range.end_ms) {
          e.logs.push_back(a);
        }
      }
      return e;
    }
    case Family::kVerifyDeletion: {
      Expectation e;
      e.kind = PayloadKind::kDeletion;
      if (row) return e;
      auto it = erased_.find(q.token);
      if (it == erased_.end()) {
        if (created_.count(q.token) == 0) return failure(ErrorCode::kUnknownKey);
        return e;
      }
      e.deletion.erased = true;
      if (it->second.seq != 0) e.deletion.deletion_seq = it->second.seq;
      e.deletion.latency_ms = it->second.erased_at_ms - it->second.reference_ms;
      return e;
    }
  }
  return failure(ErrorCode::kMalformed);
}

void Oracle::record_audit(const Role& role, std::string op, ErrorCode outcome, uint64_t count,
                          int64_t now_ms, const std::vector<Removal>& removed,
                          int64_t erased_at_ms) {
  uint64_t seq = 0;
  if (auditing_) {
    AuditEntry a;
    a.seq = seq = next_seq_++;
    a.timestamp_ms = audit_.empty() ? now_ms : std::max(now_ms, audit_.back().timestamp_ms);
    a.role = std::string(role_kind_name(role.kind));
    a.actor = role.actor.empty() ? "-" : role.actor;
    a.op = std::move(op);
    a.outcome = std::string(error_code_name(outcome));
    a.count = count;
    audit_.push_back(std::move(a));
  }
  for (const Removal& r : removed) {
    erased_[r.key] = {seq, erased_at_ms, r.reference_ms, r.ambiguous};
  }
}

std::size_t Oracle::reap(int64_t now_ms) {
  maybe_compact();
  std::vector<Removal> removed;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Digest& d = digests_[i];
    if (d.live && d.expiry_ms + d.slack_ms <= now_ms) removed.push_back({rows_[i].record.key, d.expiry_ms});
  }
  if (removed.empty()) return 0;
  for (const Removal& r : removed) erase_row(r.key);
  record_audit(Role::controller("reaper"), "TTL-REAP", ErrorCode::kOk, removed.size(), now_ms,
               removed, now_ms);
  return removed.size();
}

bool Oracle::check(const Expectation& expected, const QueryResponse& response, std::string* why) {
  if (response.code() != expected.code) {
    return fail(why, "code " + std::string(error_code_name(response.code())) + " != expected " +
                         std::string(error_code_name(expected.code)));
  }
  if (!expected.ok()) return true;
  if (response.kind() != expected.kind) return fail(why, "payload kind differs");
  const auto& payload = response.payload();
  switch (expected.kind) {
    case PayloadKind::kNone:
      return true;
    case PayloadKind::kCount:
      if (std::get<uint64_t>(payload) != expected.count) {
        return fail(why, "count " + std::to_string(std::get<uint64_t>(payload)) +
                             " != expected " + std::to_string(expected.count));
      }
      return true;
    case PayloadKind::kRecords:
    case PayloadKind::kMetadata: {
      // Mark the expected rows, then consume one mark per returned item.
      uint64_t want = ++epoch_;
      uint64_t seen = ++epoch_;
      for (std::size_t i : expected.slots) rows_[i].mark = want;
      // Results usually arrive in row order, so try the next expected slot
      // before the key lookup.
      std::size_t cursor = 0;
      auto consume = [&](const std::string& key) -> Row* {
        Row* row = nullptr;
        if (cursor < expected.slots.size() && rows_[expected.slots[cursor]].record.key == key) {
          row = &rows_[expected.slots[cursor++]];
        } else {
          auto it = slot_.find(key);
          if (it != slot_.end()) row = &rows_[it->second];
        }
        if (row == nullptr || row->mark != want) return nullptr;
        row->mark = seen;
        return row;
      };
      if (expected.kind == PayloadKind::kRecords) {
        const auto& items = std::get<RecordList>(payload).items();
        if (items.size() != expected.slots.size()) {
          return fail(why, "record count " + std::to_string(items.size()) + " != expected " +
                               std::to_string(expected.slots.size()));
        }
        for (const RecordPtr& r : items) {
          Row* row = consume(r->key);
          if (!row) return fail(why, "unexpected record " + r->key);
          if (!row->record.same_content(*r)) return fail(why, "content differs for " + r->key);
        }
      } else {
        const auto& items = std::get<std::vector<MetadataEntry>>(payload);
        if (items.size() != expected.slots.size()) {
          return fail(why, "metadata count " + std::to_string(items.size()) +
                               " != expected " + std::to_string(expected.slots.size()));
        }
        for (const MetadataEntry& m : items) {
          Row* row = consume(m.key);
          if (!row) return fail(why, "unexpected metadata " + m.key);
          if (row->record.meta != m.meta) return fail(why, "metadata differs for " + m.key);
        }
      }
      return true;
    }
    case PayloadKind::kLogs: {
      const auto& got = std::get<std::vector<AuditEntry>>(payload);
      if (got.size() != expected.logs.size()) {
        return fail(why, "log count " + std::to_string(got.size()) + " != expected " +
                             std::to_string(expected.logs.size()));
      }
      for (std::size_t i = 0; i < got.size(); ++i) {
        const AuditEntry& a = got[i];
        const AuditEntry& b = expected.logs[i];
        if (a.seq != b.seq || a.timestamp_ms != b.timestamp_ms || a.role != b.role ||
            a.actor != b.actor || a.op != b.op || a.outcome != b.outcome || a.count != b.count) {
          return fail(why, "log entry " + std::to_string(b.seq) + " differs");
        }
      }
      return true;
    }
    case PayloadKind::kDeletion:
      if (!(std::get<DeletionStatus>(payload) == expected.deletion)) {
        return fail(why, "deletion status differs");
      }
      return true;
    case PayloadKind::kFeatures:
      if (expected.features && !(std::get<FeatureReport>(payload) == *expected.features)) {
        return fail(why, "feature report differs");
      }
      return true;
  }
  return true;
}

}  // namespace pds
