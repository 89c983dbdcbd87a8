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

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pds/clock.hpp"
#include "pds/persistence.hpp"
#include "pds/record.hpp"

namespace pds {

enum class IndexedAttribute { kUsr, kPur, kObj, kDec, kShr, kTtlExpiry };

inline constexpr IndexedAttribute kAllIndexes[] = {
    IndexedAttribute::kUsr, IndexedAttribute::kPur, IndexedAttribute::kObj,
    IndexedAttribute::kDec, IndexedAttribute::kShr, IndexedAttribute::kTtlExpiry};

std::string_view indexed_attribute_name(IndexedAttribute attr);
std::optional<IndexedAttribute> parse_indexed_attribute(std::string_view name);

enum class Persistence { kNone, kAppendLog };

struct StoreConfig {
  std::set<IndexedAttribute> index_attributes{std::begin(kAllIndexes),
                                              std::end(kAllIndexes)};
  int64_t reap_interval_ms = 500;
  ClockMode clock_mode = ClockMode::kWall;
  // Background sweeps only run on the wall clock; logical-clock callers
  // drive run_reaper_once themselves.
  bool background_reaper = true;
  Persistence persistence = Persistence::kNone;
  AtRestTransform at_rest_transform = AtRestTransform::kIdentity;
  std::filesystem::path data_dir;
  std::string at_rest_key;
  // Compact once the log holds this many entries and twice the live count.
  std::size_t compaction_min_entries = 4096;

  // Sub-second erasure after expiry is only claimable at this cadence.
  bool strict_ttl() const { return reap_interval_ms > 0 && reap_interval_ms <= 1000; }
};

struct SpaceStats {
  uint64_t personal_data_bytes = 0;
  uint64_t total_db_bytes = 0;
  double space_factor = 0.0;
  uint64_t key_bytes = 0;
  uint64_t metadata_bytes = 0;
  uint64_t index_bytes = 0;
  uint64_t record_count = 0;
};

// total / personal; 0 when no personal data is stored.
double space_factor(uint64_t personal_data_bytes, uint64_t total_db_bytes);

enum class SelectorKind { kKey, kUsr, kPur, kObjAbsent, kDecAllowed, kShr, kExpiredOnly };

std::string_view selector_kind_name(SelectorKind kind);

struct Selector {
  SelectorKind kind = SelectorKind::kKey;
  std::string token;
  // Restricts matches to records owned by this user.
  std::optional<std::string> owner;

  static Selector by_key(std::string key) { return {SelectorKind::kKey, std::move(key), {}}; }
  static Selector by_usr(std::string usr) { return {SelectorKind::kUsr, std::move(usr), {}}; }
  static Selector by_pur(std::string pur) { return {SelectorKind::kPur, std::move(pur), {}}; }
  static Selector by_obj_absent(std::string pur) {
    return {SelectorKind::kObjAbsent, std::move(pur), {}};
  }
  static Selector by_dec_allowed() { return {SelectorKind::kDecAllowed, {}, {}}; }
  static Selector by_shr(std::string party) { return {SelectorKind::kShr, std::move(party), {}}; }
  static Selector expired_only() { return {SelectorKind::kExpiredOnly, {}, {}}; }

  Selector owned_by(std::string usr) const {
    Selector s = *this;
    s.owner = std::move(usr);
    return s;
  }

  // Selection semantics shared by every backend: expired records only match
  // kExpiredOnly; kPur excludes records objecting to the purpose.
  bool matches(const PersonalRecord& record, int64_t now_ms) const;
};

enum class EditOp { kAdd, kRemove, kSet };

std::string_view edit_op_name(EditOp op);
std::optional<EditOp> parse_edit_op(std::string_view name);

struct MetadataEdit {
  Attribute attribute = Attribute::kObj;
  EditOp op = EditOp::kAdd;
  TokenSet values;  // for TTL: exactly one decimal value, op kSet

  bool operator==(const MetadataEdit&) const = default;
};

// Applies `edit` to `meta`. Throws Error(kInvalidAttribute) for USR/SRC or a
// TTL edit that is not a single-valued set, Error(kMalformed) for bad tokens.
void apply_edit(const MetadataEdit& edit, Metadata* meta);

struct Erasure {
  std::string key;
  int64_t erased_at_ms = 0;
  // Expiry instant if the record had expired, otherwise the request time.
  int64_t reference_ms = 0;
  bool expired = false;
};

struct MetadataEntry {
  std::string key;
  Metadata meta;

  bool operator==(const MetadataEntry&) const = default;
};

using RecordPtr = std::shared_ptr<const PersonalRecord>;

// In-process reference store. Thread-safe: readers share, writers exclude.
// Records are immutable snapshots replaced wholesale on update, so a reader
// holding a RecordPtr never observes a torn record.
class Store {
 public:
  Store(StoreConfig config, std::shared_ptr<Clock> clock);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const StoreConfig& config() const { return config_; }
  const Clock& clock() const { return *clock_; }

  // Stamps created_at with the clock. Throws kDuplicateKey, kMalformed,
  // kStorageFailure.
  void put(PersonalRecord record);

  // Throws kNotFound on a by_key miss, kInvalidSelector for selectors that
  // do not apply to data reads.
  std::vector<RecordPtr> read_records(const Selector& selector) const;
  std::vector<MetadataEntry> read_metadata(const Selector& selector) const;

  // Raw lookup ignoring expiry; nullptr when absent.
  RecordPtr peek(std::string_view key) const;

  // Throws kNotFound, kExpired.
  void update_data(std::string_view key, std::string new_data);

  // Returns the number of records touched. Throws kInvalidAttribute,
  // kNotFound / kExpired for by_key.
  std::size_t update_metadata(const Selector& selector, const MetadataEdit& edit);

  // Throws kNotFound (by_key miss) or kExpired (by_key on an expired record).
  std::vector<Erasure> delete_records(const Selector& selector);

  // Full deterministic sweep: erases every record with expiry <= now_ms and
  // reports the erasures to the listener. Returns the erased count.
  std::size_t run_reaper_once(int64_t now_ms);
  std::size_t run_reaper_once() { return run_reaper_once(clock_->now_ms()); }

  void set_erasure_listener(std::function<void(const std::vector<Erasure>&)> listener);

  SpaceStats space_stats() const;
  std::size_t size() const;

  // Tombstones recovered from the persistence log at open.
  const std::vector<Erasure>& recovered_erasures() const { return recovered_erasures_; }

  void compact();

  // Consistency check for tests: every index equals a scan of the primary.
  bool indexes_consistent() const;

 private:
  using Postings = std::unordered_map<std::string, std::unordered_set<std::string>>;

  bool has_index(IndexedAttribute attr) const { return config_.index_attributes.count(attr) > 0; }
  void index_insert(const PersonalRecord& record);
  void index_erase(const PersonalRecord& record);
  void index_update(const PersonalRecord& old, const PersonalRecord& updated);
  void account(const PersonalRecord& record, int sign);

  template <typename Fn>
  void for_each_match(const Selector& selector, int64_t now_ms, Fn&& fn) const;

  void log_record(const PersonalRecord& record);
  void log_tombstone(std::string_view key, int64_t at_ms);
  void maybe_compact_locked();
  void compact_locked();
  void recover();
  struct Entry {
    RecordPtr record;
    std::size_t slot = 0;  // position in dense_
  };
  using EntryMap = std::unordered_map<std::string, Entry>;

  void insert_locked(RecordPtr record);
  void replace_locked(Entry& entry, RecordPtr record);
  void erase_locked(EntryMap::iterator it);
  void reaper_loop();

  StoreConfig config_;
  std::shared_ptr<Clock> clock_;

  mutable std::shared_mutex mu_;
  EntryMap records_;
  // Live records in insertion order, for full scans. Erased records leave
  // null holes until the vector is compacted.
  std::vector<RecordPtr> dense_;
  std::size_t holes_ = 0;
  std::unordered_map<IndexedAttribute, Postings> postings_;
  std::set<std::pair<int64_t, std::string>> expiry_index_;

  uint64_t personal_bytes_ = 0;
  uint64_t key_bytes_ = 0;
  uint64_t metadata_bytes_ = 0;
  uint64_t index_bytes_ = 0;

  std::unique_ptr<AppendLog> log_;
  std::vector<std::string> tombstones_;
  std::vector<Erasure> recovered_erasures_;

  std::mutex listener_mu_;
  std::function<void(const std::vector<Erasure>&)> listener_;

  std::mutex reaper_mu_;
  std::condition_variable reaper_cv_;
  bool stopping_ = false;
  std::thread reaper_;
};

}  // namespace pds
