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

#include "pds/query.hpp"

namespace pds {

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kCreateRecord: return "CREATE-RECORD";
    case Family::kDeleteRecord: return "DELETE-RECORD";
    case Family::kReadData: return "READ-DATA";
    case Family::kReadMetadata: return "READ-METADATA";
    case Family::kUpdateData: return "UPDATE-DATA";
    case Family::kUpdateMetadata: return "UPDATE-METADATA";
    case Family::kGetSystem: return "GET-SYSTEM";
    case Family::kVerifyDeletion: return "VERIFY-DELETION";
  }
  return "";
}

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::kNone: return "";
    case Dimension::kKey: return "KEY";
    case Dimension::kPur: return "PUR";
    case Dimension::kTtl: return "TTL";
    case Dimension::kUsr: return "USR";
    case Dimension::kObj: return "OBJ";
    case Dimension::kDec: return "DEC";
    case Dimension::kShr: return "SHR";
    case Dimension::kLogs: return "LOGS";
    case Dimension::kFeatures: return "FEATURES";
  }
  return "";
}

bool is_valid_pair(Family family, Dimension dim) {
  using D = Dimension;
  switch (family) {
    case Family::kCreateRecord:
      return dim == D::kNone;
    case Family::kDeleteRecord:
      return dim == D::kKey || dim == D::kPur || dim == D::kTtl || dim == D::kUsr;
    case Family::kReadData:
      return dim == D::kKey || dim == D::kPur || dim == D::kUsr || dim == D::kObj ||
             dim == D::kDec;
    case Family::kReadMetadata:
      return dim == D::kKey || dim == D::kUsr || dim == D::kShr;
    case Family::kUpdateData:
      return dim == D::kKey;
    case Family::kUpdateMetadata:
      return dim == D::kKey || dim == D::kPur || dim == D::kUsr || dim == D::kShr;
    case Family::kGetSystem:
      return dim == D::kLogs || dim == D::kFeatures;
    case Family::kVerifyDeletion:
      return dim == D::kKey;
  }
  return false;
}

std::string query_name(Family family, Dimension dim) {
  std::string name(family_name(family));
  if (family == Family::kVerifyDeletion && dim == Dimension::kKey) return name;
  if (dim == Dimension::kNone) return name;
  name.append(family == Family::kGetSystem ? "-" : "-BY-");
  name.append(dimension_name(dim));
  return name;
}

std::optional<std::pair<Family, Dimension>> parse_query_name(std::string_view name) {
  auto parse_dim = [](std::string_view text) -> std::optional<Dimension> {
    for (Dimension d : kAllDimensions) {
      if (d != Dimension::kNone && dimension_name(d) == text) return d;
    }
    return std::nullopt;
  };
  for (Family family : kAllFamilies) {
    std::string_view fname = family_name(family);
    if (name == fname) {
      return std::make_pair(family, family == Family::kVerifyDeletion ? Dimension::kKey
                                                                       : Dimension::kNone);
    }
    if (name.size() <= fname.size() || name.substr(0, fname.size()) != fname) continue;
    std::string_view rest = name.substr(fname.size());
    std::string_view sep = family == Family::kGetSystem ? "-" : "-BY-";
    if (rest.substr(0, sep.size()) != sep) continue;
    if (auto dim = parse_dim(rest.substr(sep.size()))) return std::make_pair(family, *dim);
  }
  return std::nullopt;
}

GdprQuery GdprQuery::create(PersonalRecord record) {
  GdprQuery q;
  q.family = Family::kCreateRecord;
  q.dimension = Dimension::kNone;
  q.token = record.key;
  q.record = std::move(record);
  return q;
}

GdprQuery GdprQuery::select(Family family, Dimension dim, std::string token) {
  GdprQuery q;
  q.family = family;
  q.dimension = dim;
  q.token = std::move(token);
  return q;
}

GdprQuery GdprQuery::update_data(std::string key, std::string data) {
  GdprQuery q = select(Family::kUpdateData, Dimension::kKey, std::move(key));
  q.new_data = std::move(data);
  return q;
}

GdprQuery GdprQuery::update_metadata(Dimension dim, std::string token, MetadataEdit edit) {
  GdprQuery q = select(Family::kUpdateMetadata, dim, std::move(token));
  q.edit = std::move(edit);
  return q;
}

GdprQuery GdprQuery::system_logs(TimeRange range) {
  GdprQuery q = select(Family::kGetSystem, Dimension::kLogs);
  q.range = range;
  return q;
}

GdprQuery GdprQuery::system_features() {
  return select(Family::kGetSystem, Dimension::kFeatures);
}

GdprQuery GdprQuery::verify_deletion(std::string key) {
  return select(Family::kVerifyDeletion, Dimension::kKey, std::move(key));
}

std::optional<Selector> selector_for(const GdprQuery& q) {
  if (!is_valid_pair(q.family, q.dimension)) return std::nullopt;
  switch (q.family) {
    case Family::kCreateRecord:
    case Family::kGetSystem:
    case Family::kVerifyDeletion:
      return std::nullopt;
    default:
      break;
  }
  switch (q.dimension) {
    case Dimension::kKey: return Selector::by_key(q.token);
    case Dimension::kPur: return Selector::by_pur(q.token);
    case Dimension::kUsr: return Selector::by_usr(q.token);
    case Dimension::kShr: return Selector::by_shr(q.token);
    case Dimension::kObj: return Selector::by_obj_absent(q.token);
    case Dimension::kDec: return Selector::by_dec_allowed();
    case Dimension::kTtl: return Selector::expired_only();
    default: return std::nullopt;
  }
}

std::string audit_selector_text(const GdprQuery& q) {
  switch (q.family) {
    case Family::kCreateRecord:
      return "KEY=" + (q.record ? q.record->key : q.token);
    case Family::kGetSystem:
      if (q.dimension == Dimension::kLogs) {
        return std::to_string(q.range.start_ms) + ".." + std::to_string(q.range.end_ms);
      }
      return "-";
    default:
      break;
  }
  std::string text(dimension_name(q.dimension));
  if (q.dimension != Dimension::kTtl && q.dimension != Dimension::kDec) {
    text.push_back('=');
    text.append(q.token);
  }
  if (q.family == Family::kUpdateMetadata) {
    text.push_back(';');
    text.append(attribute_name(q.edit.attribute));
    text.push_back(':');
    text.append(edit_op_name(q.edit.op));
    text.push_back(':');
    text.append(join_values(q.edit.values));
  }
  return text;
}

std::string_view capability_name(Capability capability) {
  switch (capability) {
    case Capability::kTtl: return "TTL";
    case Capability::kEncryption: return "ENCRYPTION";
    case Capability::kAuditing: return "AUDITING";
    case Capability::kMetadataIndexing: return "METADATA_INDEXING";
    case Capability::kAccessControl: return "ACCESS_CONTROL";
  }
  return "";
}

std::string_view support_name(Support support) {
  switch (support) {
    case Support::kFull: return "FULL";
    case Support::kPartial: return "PARTIAL";
    case Support::kNone: return "NONE";
  }
  return "";
}

std::optional<Capability> parse_capability(std::string_view name) {
  for (Capability c : kAllCapabilities) {
    if (capability_name(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<Support> parse_support(std::string_view name) {
  for (Support s : {Support::kFull, Support::kPartial, Support::kNone}) {
    if (support_name(s) == name) return s;
  }
  return std::nullopt;
}

QueryResponse QueryResponse::error(ErrorCode code, std::string message) {
  QueryResponse r;
  r.code_ = code;
  r.message_ = std::move(message);
  return r;
}

QueryResponse QueryResponse::records(const Role& requester, std::vector<RecordPtr> records) {
  if (requester.kind == RoleKind::kRegulator) {
    return error(ErrorCode::kDenied, "regulators never receive personal data");
  }
  QueryResponse r;
  r.payload_ = RecordList(std::move(records));
  return r;
}

QueryResponse QueryResponse::metadata(std::vector<MetadataEntry> entries) {
  QueryResponse r;
  r.payload_ = std::move(entries);
  return r;
}

QueryResponse QueryResponse::count(uint64_t n) {
  QueryResponse r;
  r.payload_ = n;
  return r;
}

QueryResponse QueryResponse::logs(std::vector<AuditEntry> entries) {
  QueryResponse r;
  r.payload_ = std::move(entries);
  return r;
}

QueryResponse QueryResponse::deletion(DeletionStatus status) {
  QueryResponse r;
  r.payload_ = status;
  return r;
}

QueryResponse QueryResponse::features(FeatureReport report) {
  QueryResponse r;
  r.payload_ = report;
  return r;
}

uint64_t QueryResponse::touched() const {
  switch (kind()) {
    case PayloadKind::kNone: return 0;
    case PayloadKind::kRecords: return std::get<RecordList>(payload_).size();
    case PayloadKind::kMetadata: return std::get<std::vector<MetadataEntry>>(payload_).size();
    case PayloadKind::kCount: return std::get<uint64_t>(payload_);
    case PayloadKind::kLogs: return std::get<std::vector<AuditEntry>>(payload_).size();
    case PayloadKind::kDeletion: return 1;
    case PayloadKind::kFeatures: return std::size(kAllCapabilities);
  }
  return 0;
}

}  // namespace pds
