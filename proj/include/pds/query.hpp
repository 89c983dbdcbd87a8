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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pds/audit.hpp"
#include "pds/error.hpp"
#include "pds/record.hpp"
#include "pds/role.hpp"
#include "pds/store.hpp"

namespace pds {

enum class Family {
  kCreateRecord,
  kDeleteRecord,
  kReadData,
  kReadMetadata,
  kUpdateData,
  kUpdateMetadata,
  kGetSystem,
  kVerifyDeletion,  // regulator workload operation, outside the base taxonomy
};

enum class Dimension { kNone, kKey, kPur, kTtl, kUsr, kObj, kDec, kShr, kLogs, kFeatures };

inline constexpr Family kAllFamilies[] = {
    Family::kCreateRecord, Family::kDeleteRecord,   Family::kReadData,
    Family::kReadMetadata, Family::kUpdateData,     Family::kUpdateMetadata,
    Family::kGetSystem,    Family::kVerifyDeletion};
inline constexpr Dimension kAllDimensions[] = {
    Dimension::kNone, Dimension::kKey, Dimension::kPur,  Dimension::kTtl,
    Dimension::kUsr,  Dimension::kObj, Dimension::kDec,  Dimension::kShr,
    Dimension::kLogs, Dimension::kFeatures};

std::string_view family_name(Family family);
std::string_view dimension_name(Dimension dim);

// True exactly for the executable (family, dimension) combinations.
bool is_valid_pair(Family family, Dimension dim);

// `READ-DATA-BY-KEY`, `CREATE-RECORD`, `GET-SYSTEM-LOGS`, `VERIFY-DELETION`.
std::string query_name(Family family, Dimension dim);
// Splits a name into family and dimension without checking the pair, so that
// invalid-but-well-spelled combinations can be reported as MALFORMED.
std::optional<std::pair<Family, Dimension>> parse_query_name(std::string_view name);

struct TimeRange {
  int64_t start_ms = 0;
  int64_t end_ms = 0;

  bool operator==(const TimeRange&) const = default;
};

struct GdprQuery {
  Family family = Family::kGetSystem;
  Dimension dimension = Dimension::kFeatures;
  std::optional<PersonalRecord> record;  // CREATE-RECORD
  std::string token;                     // key, user, purpose or party
  std::string new_data;                  // UPDATE-DATA-BY-KEY
  MetadataEdit edit;                     // UPDATE-METADATA-*
  TimeRange range;                       // GET-SYSTEM-LOGS

  bool operator==(const GdprQuery&) const = default;

  std::string name() const { return query_name(family, dimension); }

  static GdprQuery create(PersonalRecord record);
  static GdprQuery select(Family family, Dimension dim, std::string token = {});
  static GdprQuery update_data(std::string key, std::string data);
  static GdprQuery update_metadata(Dimension dim, std::string token, MetadataEdit edit);
  static GdprQuery system_logs(TimeRange range);
  static GdprQuery system_features();
  static GdprQuery verify_deletion(std::string key);
};

// Storage selector a query addresses; nullopt for queries without one.
std::optional<Selector> selector_for(const GdprQuery& query);

// Compact selector description written to the audit trail. Never contains
// personal data payloads.
std::string audit_selector_text(const GdprQuery& query);

enum class Capability { kTtl, kEncryption, kAuditing, kMetadataIndexing, kAccessControl };
enum class Support { kFull, kPartial, kNone };

inline constexpr Capability kAllCapabilities[] = {
    Capability::kTtl, Capability::kEncryption, Capability::kAuditing,
    Capability::kMetadataIndexing, Capability::kAccessControl};

std::string_view capability_name(Capability capability);
std::string_view support_name(Support support);
std::optional<Capability> parse_capability(std::string_view name);
std::optional<Support> parse_support(std::string_view name);

struct FeatureReport {
  std::array<Support, 5> levels{Support::kNone, Support::kNone, Support::kNone,
                                Support::kNone, Support::kNone};

  Support get(Capability c) const { return levels[static_cast<std::size_t>(c)]; }
  void set(Capability c, Support s) { levels[static_cast<std::size_t>(c)] = s; }
  bool operator==(const FeatureReport&) const = default;
};

// Personal-data payloads bound for a requester. Only QueryResponse::records
// can build one, and it refuses regulators.
class RecordList {
 public:
  const std::vector<RecordPtr>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  friend class QueryResponse;
  explicit RecordList(std::vector<RecordPtr> items) : items_(std::move(items)) {}
  std::vector<RecordPtr> items_;
};

enum class PayloadKind { kNone, kRecords, kMetadata, kCount, kLogs, kDeletion, kFeatures };

class QueryResponse {
 public:
  using Payload = std::variant<std::monostate, RecordList, std::vector<MetadataEntry>,
                               uint64_t, std::vector<AuditEntry>, DeletionStatus,
                               FeatureReport>;

  static QueryResponse error(ErrorCode code, std::string message);
  // Returns a DENIED response instead when the requester is a regulator.
  static QueryResponse records(const Role& requester, std::vector<RecordPtr> records);
  static QueryResponse metadata(std::vector<MetadataEntry> entries);
  static QueryResponse count(uint64_t n);
  static QueryResponse logs(std::vector<AuditEntry> entries);
  static QueryResponse deletion(DeletionStatus status);
  static QueryResponse features(FeatureReport report);

  ErrorCode code() const { return code_; }
  bool ok() const { return code_ == ErrorCode::kOk; }
  const std::string& message() const { return message_; }
  PayloadKind kind() const { return static_cast<PayloadKind>(payload_.index()); }
  const Payload& payload() const { return payload_; }

  // Number of result items (records, entries, lines) or the write count.
  uint64_t touched() const;

 private:
  QueryResponse() = default;
  ErrorCode code_ = ErrorCode::kOk;
  std::string message_;
  Payload payload_;
};

}  // namespace pds
