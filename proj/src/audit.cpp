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

#include "pds/audit.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace pds {

namespace {

void escape_into(std::string_view field, std::string* out) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (char c : field) {
    auto u = static_cast<unsigned char>(c);
    if (c == '%' || c == '|' || u < 0x20 || u == 0x7F) {
      out->push_back('%');
      out->push_back(kHex[u >> 4]);
      out->push_back(kHex[u & 0xF]);
    } else {
      out->push_back(c);
    }
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string unescape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == '%') {
      if (i + 2 >= field.size()) {
        throw Error(ErrorCode::kMalformed, "truncated escape in audit line");
      }
      int hi = hex_value(field[i + 1]);
      int lo = hex_value(field[i + 2]);
      if (hi < 0 || lo < 0) throw Error(ErrorCode::kMalformed, "bad escape in audit line");
      out.push_back(static_cast<char>(hi * 16 + lo));
      i += 2;
    } else {
      out.push_back(field[i]);
    }
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kMalformed, "bad number in audit line: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string format_audit_line(const AuditEntry& entry) {
  std::string out = std::to_string(entry.seq);
  out.push_back('|');
  out.append(std::to_string(entry.timestamp_ms));
  for (const std::string* field :
       {&entry.role, &entry.actor, &entry.op, &entry.selector, &entry.outcome}) {
    out.push_back('|');
    escape_into(*field, &out);
  }
  out.push_back('|');
  out.append(std::to_string(entry.count));
  return out;
}

AuditEntry parse_audit_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = line.find('|', start);
    fields.push_back(line.substr(start, bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (fields.size() != 8) {
    throw Error(ErrorCode::kMalformed, "audit line needs 8 fields");
  }
  AuditEntry entry;
  entry.seq = parse_number<uint64_t>(fields[0]);
  entry.timestamp_ms = parse_number<int64_t>(fields[1]);
  entry.role = unescape(fields[2]);
  entry.actor = unescape(fields[3]);
  entry.op = unescape(fields[4]);
  entry.selector = unescape(fields[5]);
  entry.outcome = unescape(fields[6]);
  entry.count = parse_number<uint64_t>(fields[7]);
  return entry;
}

AuditLog::AuditLog(Options options, std::shared_ptr<Clock> clock)
    : options_(std::move(options)), clock_(std::move(clock)) {
  if (!options_.enabled || options_.file.empty()) return;
  std::error_code ec;
  if (options_.file.has_parent_path()) {
    std::filesystem::create_directories(options_.file.parent_path(), ec);
  }
  {
    std::ifstream in(options_.file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      entries_.push_back(parse_audit_line(line));
      const AuditEntry& e = entries_.back();
      if (e.op == "CREATE-RECORD" && e.outcome == "OK" && e.selector.rfind("KEY=", 0) == 0) {
        created_.insert(e.selector.substr(4));
      }
    }
  }
  if (!entries_.empty()) next_seq_ = entries_.back().seq + 1;
  file_ = std::fopen(options_.file.c_str(), "a");
  if (file_ == nullptr) {
    throw Error(ErrorCode::kStorageFailure, "cannot open " + options_.file.string());
  }
}

AuditLog::~AuditLog() {
  if (file_ != nullptr) std::fclose(file_);
}

uint64_t AuditLog::append(const Role& role, std::string op, std::string selector,
                          ErrorCode outcome, uint64_t count,
                          const std::vector<Erasure>& erasures) {
  std::lock_guard lock(mu_);
  if (!options_.enabled) {
    note_erasures_locked(erasures, 0);
    return 0;
  }
  AuditEntry entry;
  entry.seq = next_seq_;
  entry.timestamp_ms = clock_->now_ms();
  if (!entries_.empty() && entry.timestamp_ms < entries_.back().timestamp_ms) {
    entry.timestamp_ms = entries_.back().timestamp_ms;
  }
  entry.role = std::string(role_kind_name(role.kind));
  entry.actor = role.actor.empty() ? "-" : role.actor;
  entry.op = std::move(op);
  entry.selector = std::move(selector);
  entry.outcome = std::string(error_code_name(outcome));
  if (outcome == ErrorCode::kDenied) entry.outcome = "DENIED";
  entry.count = count;
  if (file_ != nullptr) {
    std::string line = format_audit_line(entry);
    line.push_back('\n');
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() ||
        std::fflush(file_) != 0) {
      throw Error(ErrorCode::kStorageFailure, "audit write failed");
    }
  }
  ++next_seq_;
  entries_.push_back(std::move(entry));
  note_erasures_locked(erasures, entries_.back().seq);
  return entries_.back().seq;
}

std::vector<AuditEntry> AuditLog::get_system_logs(int64_t start_ms, int64_t end_ms) const {
  if (start_ms > end_ms) {
    throw Error(ErrorCode::kInvalidRange, "range start is after its end");
  }
  std::lock_guard lock(mu_);
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), start_ms,
                             [](const AuditEntry& e, int64_t t) { return e.timestamp_ms < t; });
  auto hi = std::upper_bound(lo, entries_.end(), end_ms,
                             [](int64_t t, const AuditEntry& e) { return t < e.timestamp_ms; });
  return {lo, hi};
}

std::size_t AuditLog::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::vector<AuditEntry> AuditLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

void AuditLog::note_created(std::string_view key) {
  std::lock_guard lock(mu_);
  created_.emplace(key);
}

void AuditLog::note_erasures(const std::vector<Erasure>& erasures, uint64_t seq) {
  std::lock_guard lock(mu_);
  note_erasures_locked(erasures, seq);
}

void AuditLog::note_erasures_locked(const std::vector<Erasure>& erasures, uint64_t seq) {
  for (const Erasure& e : erasures) {
    erasures_[e.key] = {seq, e.erased_at_ms, e.reference_ms};
  }
}

DeletionStatus AuditLog::verify_deletion(std::string_view key, bool present) const {
  std::lock_guard lock(mu_);
  std::string k(key);
  auto it = erasures_.find(k);
  if (present) {
    return {};
  }
  if (it == erasures_.end()) {
    if (created_.count(k) == 0) {
      throw Error(ErrorCode::kUnknownKey, "key '" + k + "' never appears in the audit trail");
    }
    return {};
  }
  DeletionStatus status;
  status.erased = true;
  if (it->second.seq != 0) status.deletion_seq = it->second.seq;
  status.latency_ms = it->second.erased_at_ms - it->second.reference_ms;
  return status;
}

}  // namespace pds
