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

#include <memory>
#include <vector>

#include "pds/audit.hpp"
#include "pds/clock.hpp"
#include "pds/policy.hpp"
#include "pds/properties.hpp"
#include "pds/query.hpp"
#include "pds/store.hpp"

namespace pds {

struct ServiceConfig {
  StoreConfig store;
  bool auditing = true;

  // Keys: store.index (all, none, or a comma list of USR,PUR,OBJ,DEC,SHR,TTL),
  // store.reap_interval_ms, store.clock (wall|logical), store.persistence
  // (none|log), store.encryption, store.data_dir, store.auditing. The data
  // directory falls back to $PDS_DATA_DIR; the at-rest key is only read from
  // $PDS_AT_REST_KEY. Without store.clock, runs that validate strictly get a
  // logical clock. Throws Error(kInvalidArgument).
  static ServiceConfig from_properties(const Properties& props);
};

// The query front door: authorize, dispatch to the store or the audit log,
// audit, respond. Every execute call, denied or malformed ones included,
// appends exactly one audit entry before the response is returned.
class GdprService {
 public:
  explicit GdprService(ServiceConfig config);
  ~GdprService();

  GdprService(const GdprService&) = delete;
  GdprService& operator=(const GdprService&) = delete;

  QueryResponse execute(const Role& role, const GdprQuery& query);

  FeatureReport get_system_features() const;

  // One reaper pass at the current clock reading; erasures are audited as a
  // single TTL-REAP entry.
  std::size_t reap();

  // nullptr unless the service runs on a logical clock.
  LogicalClock* logical_clock() const { return logical_clock_; }
  const Clock& clock() const { return *clock_; }

  Store& store() { return *store_; }
  const Store& store() const { return *store_; }
  AuditLog& audit() { return *audit_; }
  const AuditLog& audit() const { return *audit_; }
  const ServiceConfig& config() const { return config_; }

 private:
  QueryResponse run(const Role& role, const GdprQuery& query, std::vector<Erasure>* erasures);

  ServiceConfig config_;
  std::shared_ptr<Clock> clock_;
  LogicalClock* logical_clock_ = nullptr;
  std::unique_ptr<AuditLog> audit_;
  std::unique_ptr<Store> store_;
};

}  // namespace pds
