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

#include "pds/service.hpp"

namespace pds {

namespace {

bool needs_token(Dimension dim) {
  switch (dim) {
    case Dimension::kKey:
    case Dimension::kPur:
    case Dimension::kUsr:
    case Dimension::kObj:
    case Dimension::kShr:
      return true;
    default:
      return false;
  }
}

std::unique_ptr<Clock> make_clock(ClockMode mode) {
  if (mode == ClockMode::kLogical) return std::make_unique<LogicalClock>();
  return std::make_unique<WallClock>();
}

}  // namespace

GdprService::GdprService(ServiceConfig config)
    : config_(std::move(config)), clock_(make_clock(config_.store.clock_mode)) {
  if (clock_->mode() == ClockMode::kLogical) {
    logical_clock_ = static_cast<LogicalClock*>(clock_.get());
  }
  AuditLog::Options audit_options;
  audit_options.enabled = config_.auditing;
  if (config_.store.persistence == Persistence::kAppendLog) {
    audit_options.file = config_.store.data_dir / "audit.log";
  }
  audit_ = std::make_unique<AuditLog>(std::move(audit_options), clock_);
  store_ = std::make_unique<Store>(config_.store, clock_);
  audit_->note_erasures(store_->recovered_erasures(), 0);
  store_->set_erasure_listener([this](const std::vector<Erasure>& erased) {
    audit_->append(Role::controller("reaper"), "TTL-REAP", "TTL", ErrorCode::kOk,
                   erased.size(), erased);
  });
}

GdprService::~GdprService() {
  // The reaper thread must stop before the audit log it reports to goes away.
  store_.reset();
}

QueryResponse GdprService::execute(const Role& role, const GdprQuery& query) {
  std::vector<Erasure> erasures;
  QueryResponse response = run(role, query, &erasures);
  if (response.ok() && query.family == Family::kCreateRecord && query.record) {
    audit_->note_created(query.record->key);
  }
  try {
    audit_->append(role, query.name(), audit_selector_text(query), response.code(),
                   response.ok() ? response.touched() : 0, erasures);
  } catch (const Error& e) {
    return QueryResponse::error(ErrorCode::kStorageFailure, e.what());
  }
  return response;
}

QueryResponse GdprService::run(const Role& role, const GdprQuery& q,
                               std::vector<Erasure>* erasures) {
  if (!is_valid_pair(q.family, q.dimension)) {
    return QueryResponse::error(ErrorCode::kMalformed, "unsupported query " + q.name());
  }
  if (q.family == Family::kCreateRecord) {
    if (!q.record) return QueryResponse::error(ErrorCode::kMalformed, "missing record");
  } else if (needs_token(q.dimension) && !is_valid_token(q.token)) {
    return QueryResponse::error(ErrorCode::kMalformed, "invalid selector token");
  }

  Decision decision = authorize(role, q);
  if (decision.verdict == Verdict::kDeny) {
    return QueryResponse::error(ErrorCode::kDenied, decision.reason);
  }
  bool filtered = decision.verdict == Verdict::kAllowFiltered;
  if (filtered && q.dimension == Dimension::kKey) {
    RecordPtr existing = store_->peek(q.token);
    if (existing && existing->meta.usr != decision.owner) {
      return QueryResponse::error(ErrorCode::kDenied, "not-owner");
    }
  }
  std::optional<Selector> selector = selector_for(q);
  if (selector && filtered) selector = selector->owned_by(decision.owner);

  try {
    switch (q.family) {
      case Family::kCreateRecord:
        store_->put(*q.record);
        return QueryResponse::count(1);
      case Family::kDeleteRecord:
        *erasures = store_->delete_records(*selector);
        return QueryResponse::count(erasures->size());
      case Family::kReadData:
        return QueryResponse::records(role, store_->read_records(*selector));
      case Family::kReadMetadata:
        return QueryResponse::metadata(store_->read_metadata(*selector));
      case Family::kUpdateData:
        store_->update_data(q.token, q.new_data);
        return QueryResponse::count(1);
      case Family::kUpdateMetadata:
        return QueryResponse::count(store_->update_metadata(*selector, q.edit));
      case Family::kGetSystem:
        if (q.dimension == Dimension::kLogs) {
          return QueryResponse::logs(audit_->get_system_logs(q.range.start_ms, q.range.end_ms));
        }
        return QueryResponse::features(get_system_features());
      case Family::kVerifyDeletion:
        return QueryResponse::deletion(
            audit_->verify_deletion(q.token, store_->peek(q.token) != nullptr));
    }
  } catch (const Error& e) {
    return QueryResponse::error(e.code(), e.what());
  }
  return QueryResponse::error(ErrorCode::kMalformed, "unsupported query");
}

FeatureReport GdprService::get_system_features() const {
  const StoreConfig& sc = config_.store;
  FeatureReport report;
  if (sc.reap_interval_ms <= 0) {
    report.set(Capability::kTtl, Support::kNone);
  } else {
    report.set(Capability::kTtl, sc.strict_ttl() ? Support::kFull : Support::kPartial);
  }
  bool encrypted = sc.persistence == Persistence::kAppendLog &&
                   sc.at_rest_transform == AtRestTransform::kEncrypted;
  report.set(Capability::kEncryption, encrypted ? Support::kFull : Support::kNone);
  report.set(Capability::kAuditing, config_.auditing ? Support::kFull : Support::kNone);
  std::size_t indexed = sc.index_attributes.size();
  report.set(Capability::kMetadataIndexing,
             indexed == 0 ? Support::kNone
             : indexed == std::size(kAllIndexes) ? Support::kFull
                                                 : Support::kPartial);
  report.set(Capability::kAccessControl, Support::kFull);
  return report;
}

std::size_t GdprService::reap() { return store_->run_reaper_once(); }

}  // namespace pds
