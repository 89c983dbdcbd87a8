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

#include "pds/store.hpp"

#include <charconv>

#include "pds/error.hpp"

namespace pds {

namespace {

constexpr std::string_view kRecordTag = "REC;";
constexpr std::string_view kTombstoneTag = "DEL;";
constexpr uint64_t kExpiryEntryBytes = sizeof(int64_t);

// Tokens a record contributes to a secondary index.
template <typename Fn>
void for_each_indexed_token(IndexedAttribute attr, const PersonalRecord& record,
                            Fn&& fn) {
  const Metadata& m = record.meta;
  switch (attr) {
    case IndexedAttribute::kUsr: fn(m.usr); break;
    case IndexedAttribute::kPur: for (const auto& t : m.pur) fn(t); break;
    case IndexedAttribute::kObj: for (const auto& t : m.obj) fn(t); break;
    case IndexedAttribute::kDec: for (const auto& t : m.dec) fn(t); break;
    case IndexedAttribute::kShr: for (const auto& t : m.shr) fn(t); break;
    case IndexedAttribute::kTtlExpiry: break;
  }
}

int64_t parse_i64(std::string_view text) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kStorageFailure,
                "corrupt log entry: bad integer '" + std::string(text) + "'");
  }
  return v;
}

[[noreturn]] void invalid_selector(SelectorKind kind, const char* op) {
  throw Error(ErrorCode::kInvalidSelector,
              std::string(selector_kind_name(kind)) + " is not valid for " + op);
}

}  // namespace

std::string_view indexed_attribute_name(IndexedAttribute attr) {
  switch (attr) {
    case IndexedAttribute::kUsr: return "USR";
    case IndexedAttribute::kPur: return "PUR";
    case IndexedAttribute::kObj: return "OBJ";
    case IndexedAttribute::kDec: return "DEC";
    case IndexedAttribute::kShr: return "SHR";
    case IndexedAttribute::kTtlExpiry: return "TTL";
  }
  return "";
}

std::optional<IndexedAttribute> parse_indexed_attribute(std::string_view name) {
  for (IndexedAttribute attr : kAllIndexes) {
    if (indexed_attribute_name(attr) == name) return attr;
  }
  return std::nullopt;
}

double space_factor(uint64_t personal_data_bytes, uint64_t total_db_bytes) {
  if (personal_data_bytes == 0) return 0.0;
  return static_cast<double>(total_db_bytes) /
         static_cast<double>(personal_data_bytes);
}

std::string_view selector_kind_name(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::kKey: return "KEY";
    case SelectorKind::kUsr: return "USR";
    case SelectorKind::kPur: return "PUR";
    case SelectorKind::kObjAbsent: return "OBJ";
    case SelectorKind::kDecAllowed: return "DEC";
    case SelectorKind::kShr: return "SHR";
    case SelectorKind::kExpiredOnly: return "TTL";
  }
  return "";
}

bool Selector::matches(const PersonalRecord& record, int64_t now_ms) const {
  bool expired = record.expiry_ms() <= now_ms;
  if (kind == SelectorKind::kExpiredOnly) {
    return expired && (!owner || record.meta.usr == *owner);
  }
  if (expired) return false;
  if (owner && record.meta.usr != *owner) return false;
  const Metadata& m = record.meta;
  switch (kind) {
    case SelectorKind::kKey: return record.key == token;
    case SelectorKind::kUsr: return m.usr == token;
    case SelectorKind::kPur: return m.pur.count(token) > 0 && m.obj.count(token) == 0;
    case SelectorKind::kObjAbsent: return m.obj.count(token) == 0;
    case SelectorKind::kDecAllowed: return m.obj.count(kAutomatedObjection) == 0;
    case SelectorKind::kShr: return m.shr.count(token) > 0;
    case SelectorKind::kExpiredOnly: break;
  }
  return false;
}

std::string_view edit_op_name(EditOp op) {
  switch (op) {
    case EditOp::kAdd: return "add";
    case EditOp::kRemove: return "remove";
    case EditOp::kSet: return "set";
  }
  return "";
}

std::optional<EditOp> parse_edit_op(std::string_view name) {
  for (EditOp op : {EditOp::kAdd, EditOp::kRemove, EditOp::kSet}) {
    if (edit_op_name(op) == name) return op;
  }
  return std::nullopt;
}

void apply_edit(const MetadataEdit& edit, Metadata* meta) {
  switch (edit.attribute) {
    case Attribute::kUsr:
    case Attribute::kSrc:
      throw Error(ErrorCode::kInvalidAttribute,
                  std::string(attribute_name(edit.attribute)) +
                      " is immutable after creation");
    case Attribute::kTtl: {
      if (edit.op != EditOp::kSet || edit.values.size() != 1) {
        throw Error(ErrorCode::kInvalidAttribute, "TTL supports set with one value");
      }
      const std::string& text = *edit.values.begin();
      int64_t ttl = -1;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ttl);
      if (ec != std::errc() || ptr != text.data() + text.size() || ttl < 0 ||
          ttl > kMaxTtlSeconds) {
        throw Error(ErrorCode::kMalformed, "TTL must be a non-negative integer");
      }
      meta->ttl = ttl;
      return;
    }
    default:
      break;
  }
  for (const auto& token : edit.values) {
    if (!is_valid_token(token)) {
      throw Error(ErrorCode::kMalformed, "invalid token '" + token + "'");
    }
  }
  TokenSet& set = meta->tokens(edit.attribute);
  switch (edit.op) {
    case EditOp::kAdd:
      set.insert(edit.values.begin(), edit.values.end());
      break;
    case EditOp::kRemove:
      for (const auto& token : edit.values) set.erase(token);
      break;
    case EditOp::kSet:
      set = edit.values;
      break;
  }
}

Store::Store(StoreConfig config, std::shared_ptr<Clock> clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  for (IndexedAttribute attr : config_.index_attributes) {
    if (attr != IndexedAttribute::kTtlExpiry) postings_[attr];
  }
  if (config_.persistence == Persistence::kAppendLog) {
    auto transform = config_.at_rest_transform == AtRestTransform::kEncrypted
                         ? make_encrypting_transform(config_.at_rest_key)
                         : make_identity_transform();
    log_ = std::make_unique<AppendLog>(config_.data_dir / "store.log",
                                       std::move(transform));
    recover();
  }
  if (config_.background_reaper && clock_->mode() == ClockMode::kWall &&
      config_.reap_interval_ms > 0) {
    reaper_ = std::thread([this] { reaper_loop(); });
  }
}

Store::~Store() {
  {
    std::lock_guard lock(reaper_mu_);
    stopping_ = true;
  }
  reaper_cv_.notify_all();
  if (reaper_.joinable()) reaper_.join();
}

void Store::reaper_loop() {
  std::unique_lock lock(reaper_mu_);
  while (!stopping_) {
    reaper_cv_.wait_for(lock, std::chrono::milliseconds(config_.reap_interval_ms),
                        [this] { return stopping_; });
    if (stopping_) break;
    lock.unlock();
    try {
      run_reaper_once();
    } catch (const Error&) {
      // Persistence failure; the next pass retries the same keys.
    }
    lock.lock();
  }
}

void Store::recover() {
  for (const std::string& payload : log_->replay()) {
    std::string_view p = payload;
    if (p.substr(0, kRecordTag.size()) == kRecordTag) {
      p.remove_prefix(kRecordTag.size());
      std::size_t semi = p.find(';');
      if (semi == std::string_view::npos) {
        throw Error(ErrorCode::kStorageFailure, "corrupt record entry");
      }
      int64_t created = parse_i64(p.substr(0, semi));
      PersonalRecord record = parse_record(p.substr(semi + 1));
      record.created_at_ms = created;
      if (auto it = records_.find(record.key); it != records_.end()) {
        erase_locked(it);
      }
      auto ptr = std::make_shared<const PersonalRecord>(std::move(record));
      index_insert(*ptr);
      account(*ptr, +1);
      insert_locked(std::move(ptr));
    } else if (p.substr(0, kTombstoneTag.size()) == kTombstoneTag) {
      p.remove_prefix(kTombstoneTag.size());
      std::size_t semi = p.find(';');
      std::string key(p.substr(0, semi));
      std::string_view rest = semi == std::string_view::npos ? "" : p.substr(semi + 1);
      if (!rest.empty() && rest.back() == ';') rest.remove_suffix(1);
      int64_t at = parse_i64(rest);
      if (auto it = records_.find(key); it != records_.end()) erase_locked(it);
      recovered_erasures_.push_back({key, at, at, false});
      tombstones_.push_back(payload);
    } else {
      throw Error(ErrorCode::kStorageFailure, "unknown log entry type");
    }
  }
}

void Store::index_insert(const PersonalRecord& record) {
  for (auto& [attr, postings] : postings_) {
    for_each_indexed_token(attr, record, [&](const std::string& token) {
      if (postings[token].insert(record.key).second) {
        index_bytes_ += token.size() + record.key.size();
      }
    });
  }
  if (has_index(IndexedAttribute::kTtlExpiry)) {
    if (expiry_index_.emplace(record.expiry_ms(), record.key).second) {
      index_bytes_ += kExpiryEntryBytes + record.key.size();
    }
  }
}

void Store::index_erase(const PersonalRecord& record) {
  for (auto& [attr, postings] : postings_) {
    for_each_indexed_token(attr, record, [&](const std::string& token) {
      auto it = postings.find(token);
      if (it == postings.end()) return;
      if (it->second.erase(record.key) > 0) {
        index_bytes_ -= token.size() + record.key.size();
      }
      if (it->second.empty()) postings.erase(it);
    });
  }
  if (has_index(IndexedAttribute::kTtlExpiry)) {
    if (expiry_index_.erase({record.expiry_ms(), record.key}) > 0) {
      index_bytes_ -= kExpiryEntryBytes + record.key.size();
    }
  }
}

void Store::index_update(const PersonalRecord& old, const PersonalRecord& updated) {
  for (auto& [attr, postings] : postings_) {
    std::vector<const std::string*> before, after;
    for_each_indexed_token(attr, old, [&](const std::string& t) { before.push_back(&t); });
    for_each_indexed_token(attr, updated, [&](const std::string& t) { after.push_back(&t); });
    auto same = [](const std::string* a, const std::string* b) { return *a == *b; };
    if (std::equal(before.begin(), before.end(), after.begin(), after.end(), same)) continue;
    for (const std::string* t : before) {
      auto it = postings.find(*t);
      if (it == postings.end()) continue;
      if (it->second.erase(old.key) > 0) index_bytes_ -= t->size() + old.key.size();
      if (it->second.empty()) postings.erase(it);
    }
    for (const std::string* t : after) {
      if (postings[*t].insert(updated.key).second) {
        index_bytes_ += t->size() + updated.key.size();
      }
    }
  }
  if (has_index(IndexedAttribute::kTtlExpiry) && old.expiry_ms() != updated.expiry_ms()) {
    if (expiry_index_.erase({old.expiry_ms(), old.key}) > 0) {
      index_bytes_ -= kExpiryEntryBytes + old.key.size();
    }
    if (expiry_index_.emplace(updated.expiry_ms(), updated.key).second) {
      index_bytes_ += kExpiryEntryBytes + updated.key.size();
    }
  }
}

void Store::account(const PersonalRecord& record, int sign) {
  auto apply = [sign](uint64_t& counter, std::size_t bytes) {
    if (sign > 0) counter += bytes; else counter -= bytes;
  };
  apply(personal_bytes_, record.data.size());
  apply(key_bytes_, record.key.size());
  apply(metadata_bytes_, record.meta.value_bytes());
}

void Store::insert_locked(RecordPtr record) {
  std::string key = record->key;
  records_.emplace(std::move(key), Entry{record, dense_.size()});
  dense_.push_back(std::move(record));
}

void Store::replace_locked(Entry& entry, RecordPtr record) {
  dense_[entry.slot] = record;
  entry.record = std::move(record);
}

void Store::erase_locked(EntryMap::iterator it) {
  RecordPtr record = it->second.record;
  index_erase(*record);
  account(*record, -1);
  dense_[it->second.slot] = nullptr;
  ++holes_;
  records_.erase(it);
  if (holes_ < 1024 || holes_ * 2 < dense_.size()) return;
  std::size_t next = 0;
  for (RecordPtr& r : dense_) {
    if (!r) continue;
    records_.find(r->key)->second.slot = next;
    dense_[next++] = std::move(r);
  }
  dense_.resize(next);
  holes_ = 0;
}

template <typename Fn>
void Store::for_each_match(const Selector& selector, int64_t now_ms, Fn&& fn) const {
  auto visit_keys = [&](const std::unordered_set<std::string>& keys) {
    for (const auto& key : keys) {
      auto it = records_.find(key);
      if (it != records_.end() && selector.matches(*it->second.record, now_ms)) {
        fn(it->second.record);
      }
    }
  };
  auto posting_source = [&](IndexedAttribute attr,
                            const std::string& token) -> const std::unordered_set<std::string>* {
    auto pit = postings_.find(attr);
    if (pit == postings_.end()) return nullptr;
    static const std::unordered_set<std::string> kEmpty;
    auto it = pit->second.find(token);
    return it == pit->second.end() ? &kEmpty : &it->second;
  };

  switch (selector.kind) {
    case SelectorKind::kKey: {
      auto it = records_.find(selector.token);
      if (it != records_.end() && selector.matches(*it->second.record, now_ms)) {
        fn(it->second.record);
      }
      return;
    }
    case SelectorKind::kExpiredOnly:
      if (has_index(IndexedAttribute::kTtlExpiry) && !selector.owner) {
        for (const auto& [expiry, key] : expiry_index_) {
          if (expiry > now_ms) break;
          auto it = records_.find(key);
          if (it != records_.end()) fn(it->second.record);
        }
        return;
      }
      break;
    default:
      break;
  }

  if (selector.owner) {
    if (auto* keys = posting_source(IndexedAttribute::kUsr, *selector.owner)) {
      visit_keys(*keys);
      return;
    }
  }
  const std::unordered_set<std::string>* keys = nullptr;
  switch (selector.kind) {
    case SelectorKind::kUsr: keys = posting_source(IndexedAttribute::kUsr, selector.token); break;
    case SelectorKind::kPur: keys = posting_source(IndexedAttribute::kPur, selector.token); break;
    case SelectorKind::kShr: keys = posting_source(IndexedAttribute::kShr, selector.token); break;
    default: break;
  }
  if (keys != nullptr) {
    visit_keys(*keys);
    return;
  }
  for (const RecordPtr& record : dense_) {
    if (record && selector.matches(*record, now_ms)) fn(record);
  }
}

void Store::log_record(const PersonalRecord& record) {
  if (!log_) return;
  std::string payload(kRecordTag);
  payload.append(std::to_string(record.created_at_ms)).push_back(';');
  payload.append(serialize_record(record));
  log_->append(payload);
}

void Store::log_tombstone(std::string_view key, int64_t at_ms) {
  if (!log_) return;
  std::string payload(kTombstoneTag);
  payload.append(key).push_back(';');
  payload.append(std::to_string(at_ms)).push_back(';');
  log_->append(payload);
  tombstones_.push_back(std::move(payload));
}

void Store::maybe_compact_locked() {
  if (!log_) return;
  std::size_t live = records_.size() + tombstones_.size();
  if (log_->entry_count() >= config_.compaction_min_entries &&
      log_->entry_count() > 2 * live) {
    compact_locked();
  }
}

void Store::compact_locked() {
  if (!log_) return;
  std::vector<std::string> payloads = tombstones_;
  payloads.reserve(payloads.size() + records_.size());
  for (const RecordPtr& record : dense_) {
    if (!record) continue;
    std::string payload(kRecordTag);
    payload.append(std::to_string(record->created_at_ms)).push_back(';');
    payload.append(serialize_record(*record));
    payloads.push_back(std::move(payload));
  }
  log_->rewrite(payloads);
}

void Store::compact() {
  std::unique_lock lock(mu_);
  compact_locked();
}

void Store::put(PersonalRecord record) {
  validate_record(record);
  std::unique_lock lock(mu_);
  if (records_.count(record.key) > 0) {
    throw Error(ErrorCode::kDuplicateKey, "key '" + record.key + "' already exists");
  }
  record.created_at_ms = clock_->now_ms();
  log_record(record);
  auto ptr = std::make_shared<const PersonalRecord>(std::move(record));
  index_insert(*ptr);
  account(*ptr, +1);
  insert_locked(std::move(ptr));
  maybe_compact_locked();
}

RecordPtr Store::peek(std::string_view key) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(std::string(key));
  return it == records_.end() ? nullptr : it->second.record;
}

std::vector<RecordPtr> Store::read_records(const Selector& selector) const {
  switch (selector.kind) {
    case SelectorKind::kKey:
    case SelectorKind::kUsr:
    case SelectorKind::kPur:
    case SelectorKind::kObjAbsent:
    case SelectorKind::kDecAllowed:
      break;
    default:
      invalid_selector(selector.kind, "read_records");
  }
  int64_t now = clock_->now_ms();
  std::vector<RecordPtr> out;
  std::shared_lock lock(mu_);
  for_each_match(selector, now, [&](const RecordPtr& r) { out.push_back(r); });
  if (selector.kind == SelectorKind::kKey && out.empty()) {
    throw Error(ErrorCode::kNotFound, "no live record '" + selector.token + "'");
  }
  return out;
}

std::vector<MetadataEntry> Store::read_metadata(const Selector& selector) const {
  switch (selector.kind) {
    case SelectorKind::kKey:
    case SelectorKind::kUsr:
    case SelectorKind::kShr:
      break;
    default:
      invalid_selector(selector.kind, "read_metadata");
  }
  int64_t now = clock_->now_ms();
  std::vector<MetadataEntry> out;
  std::shared_lock lock(mu_);
  for_each_match(selector, now, [&](const RecordPtr& r) {
    out.push_back({r->key, r->meta});
  });
  if (selector.kind == SelectorKind::kKey && out.empty()) {
    throw Error(ErrorCode::kNotFound, "no live record '" + selector.token + "'");
  }
  return out;
}

void Store::update_data(std::string_view key, std::string new_data) {
  if (!is_valid_token(new_data)) {
    throw Error(ErrorCode::kMalformed, "invalid data token");
  }
  std::unique_lock lock(mu_);
  auto it = records_.find(std::string(key));
  if (it == records_.end()) {
    throw Error(ErrorCode::kNotFound, "no record '" + std::string(key) + "'");
  }
  const RecordPtr& current = it->second.record;
  if (current->expiry_ms() <= clock_->now_ms()) {
    throw Error(ErrorCode::kExpired, "record '" + std::string(key) + "' has expired");
  }
  auto updated = std::make_shared<PersonalRecord>(*current);
  updated->data = std::move(new_data);
  log_record(*updated);
  personal_bytes_ -= current->data.size();
  personal_bytes_ += updated->data.size();
  replace_locked(it->second, std::move(updated));
  maybe_compact_locked();
}

std::size_t Store::update_metadata(const Selector& selector, const MetadataEdit& edit) {
  switch (selector.kind) {
    case SelectorKind::kKey:
    case SelectorKind::kPur:
    case SelectorKind::kUsr:
    case SelectorKind::kShr:
      break;
    default:
      invalid_selector(selector.kind, "update_metadata");
  }
  {
    // Surface attribute errors even when nothing matches.
    Metadata probe;
    probe.usr = "probe";
    apply_edit(edit, &probe);
  }
  std::unique_lock lock(mu_);
  int64_t now = clock_->now_ms();
  std::vector<RecordPtr> matched;
  if (selector.kind == SelectorKind::kKey) {
    auto it = records_.find(selector.token);
    if (it == records_.end() ||
        (selector.owner && it->second.record->meta.usr != *selector.owner)) {
      throw Error(ErrorCode::kNotFound, "no record '" + selector.token + "'");
    }
    if (it->second.record->expiry_ms() <= now) {
      throw Error(ErrorCode::kExpired, "record '" + selector.token + "' has expired");
    }
    matched.push_back(it->second.record);
  } else {
    for_each_match(selector, now, [&](const RecordPtr& r) { matched.push_back(r); });
  }
  for (const RecordPtr& old : matched) {
    auto updated = std::make_shared<PersonalRecord>(*old);
    apply_edit(edit, &updated->meta);
    if (updated->meta == old->meta) continue;
    log_record(*updated);
    index_update(*old, *updated);
    metadata_bytes_ -= old->meta.value_bytes();
    metadata_bytes_ += updated->meta.value_bytes();
    replace_locked(records_.find(old->key)->second, std::move(updated));
  }
  maybe_compact_locked();
  return matched.size();
}

std::vector<Erasure> Store::delete_records(const Selector& selector) {
  switch (selector.kind) {
    case SelectorKind::kKey:
    case SelectorKind::kPur:
    case SelectorKind::kUsr:
    case SelectorKind::kExpiredOnly:
      break;
    default:
      invalid_selector(selector.kind, "delete_records");
  }
  std::unique_lock lock(mu_);
  int64_t now = clock_->now_ms();
  std::vector<RecordPtr> matched;
  if (selector.kind == SelectorKind::kKey) {
    auto it = records_.find(selector.token);
    if (it == records_.end() ||
        (selector.owner && it->second.record->meta.usr != *selector.owner)) {
      throw Error(ErrorCode::kNotFound, "no record '" + selector.token + "'");
    }
    if (it->second.record->expiry_ms() <= now) {
      throw Error(ErrorCode::kExpired, "record '" + selector.token + "' has expired");
    }
    matched.push_back(it->second.record);
  } else {
    for_each_match(selector, now, [&](const RecordPtr& r) { matched.push_back(r); });
  }
  std::vector<Erasure> erased;
  erased.reserve(matched.size());
  for (const RecordPtr& record : matched) {
    log_tombstone(record->key, now);
    bool expired = record->expiry_ms() <= now;
    erased.push_back({record->key, now, expired ? record->expiry_ms() : now, expired});
    erase_locked(records_.find(record->key));
  }
  maybe_compact_locked();
  return erased;
}

std::size_t Store::run_reaper_once(int64_t now_ms) {
  std::vector<std::pair<std::string, int64_t>> candidates;
  {
    std::shared_lock lock(mu_);
    for_each_match(Selector::expired_only(), now_ms, [&](const RecordPtr& r) {
      candidates.emplace_back(r->key, r->expiry_ms());
    });
  }
  std::vector<Erasure> erased;
  erased.reserve(candidates.size());
  for (const auto& [key, expiry] : candidates) {
    std::unique_lock lock(mu_);
    auto it = records_.find(key);
    if (it == records_.end() || it->second.record->expiry_ms() > now_ms) continue;
    int64_t at = clock_->mode() == ClockMode::kWall
                     ? std::max(now_ms, clock_->now_ms())
                     : now_ms;
    log_tombstone(key, at);
    erased.push_back({key, at, it->second.record->expiry_ms(), true});
    erase_locked(it);
  }
  if (!erased.empty()) {
    {
      std::unique_lock lock(mu_);
      maybe_compact_locked();
    }
    std::function<void(const std::vector<Erasure>&)> listener;
    {
      std::lock_guard lock(listener_mu_);
      listener = listener_;
    }
    if (listener) listener(erased);
  }
  return erased.size();
}

void Store::set_erasure_listener(std::function<void(const std::vector<Erasure>&)> listener) {
  std::lock_guard lock(listener_mu_);
  listener_ = std::move(listener);
}

SpaceStats Store::space_stats() const {
  std::shared_lock lock(mu_);
  SpaceStats stats;
  stats.personal_data_bytes = personal_bytes_;
  stats.key_bytes = key_bytes_;
  stats.metadata_bytes = metadata_bytes_;
  stats.index_bytes = index_bytes_;
  stats.total_db_bytes = personal_bytes_ + key_bytes_ + metadata_bytes_ + index_bytes_;
  stats.space_factor = space_factor(stats.personal_data_bytes, stats.total_db_bytes);
  stats.record_count = records_.size();
  return stats;
}

std::size_t Store::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

bool Store::indexes_consistent() const {
  std::shared_lock lock(mu_);
  uint64_t index_bytes = 0;
  for (const auto& [attr, postings] : postings_) {
    Postings expected;
    for (const auto& [key, entry] : records_) {
      for_each_indexed_token(attr, *entry.record, [&](const std::string& token) {
        expected[token].insert(key);
        index_bytes += token.size() + key.size();
      });
    }
    if (expected != postings) return false;
  }
  if (has_index(IndexedAttribute::kTtlExpiry)) {
    std::set<std::pair<int64_t, std::string>> expected;
    for (const auto& [key, entry] : records_) {
      expected.emplace(entry.record->expiry_ms(), key);
      index_bytes += kExpiryEntryBytes + key.size();
    }
    if (expected != expiry_index_) return false;
  }
  std::size_t live = 0;
  for (std::size_t i = 0; i < dense_.size(); ++i) {
    if (!dense_[i]) continue;
    ++live;
    auto it = records_.find(dense_[i]->key);
    if (it == records_.end() || it->second.slot != i || it->second.record != dense_[i]) {
      return false;
    }
  }
  if (live != records_.size() || dense_.size() - live != holes_) return false;
  return index_bytes == index_bytes_;
}

}  // namespace pds
