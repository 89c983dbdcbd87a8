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

#include <gtest/gtest.h>

#include "pds/service.hpp"
#include "test_util.hpp"

namespace pds {
namespace {

using testing::make_record;

ServiceConfig logical_service() {
  ServiceConfig config;
  config.store = testing::logical_config();
  return config;
}

class ServiceTest : public ::testing::Test {
 protected:
  QueryResponse run(const Role& role, const GdprQuery& q) { return service_.execute(role, q); }
  void create(PersonalRecord r) {
    ASSERT_TRUE(run(Role::controller(), GdprQuery::create(std::move(r))).ok());
  }

  GdprService service_{logical_service()};
};

TEST_F(ServiceTest, ControllerCreatesExampleRecord) {
  QueryResponse r = run(Role::controller(), GdprQuery::create(parse_record(testing::kExampleLine)));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(std::get<uint64_t>(r.payload()), 1u);
  EXPECT_EQ(service_.store().size(), 1u);
  auto entries = service_.audit().entries();
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].op, "CREATE-RECORD");
  EXPECT_EQ(entries[0].selector, "KEY=ph-1x4b");
  EXPECT_EQ(entries[0].count, 1u);
}

TEST_F(ServiceTest, RegulatorDataReadIsDeniedAndAudited) {
  create(make_record("k", "neo"));
  std::size_t before = service_.audit().size();
  QueryResponse r = run(Role::regulator("ico"),
                        GdprQuery::select(Family::kReadData, Dimension::kKey, "k"));
  EXPECT_EQ(r.code(), ErrorCode::kDenied);
  ASSERT_EQ(service_.audit().size(), before + 1);
  EXPECT_EQ(service_.audit().entries().back().outcome, "DENIED");
  EXPECT_EQ(service_.audit().entries().back().role, "REGULATOR");
}

TEST_F(ServiceTest, CustomerReadsOnlyOwnRecords) {
  create(make_record("a", "neo"));
  create(make_record("b", "neo"));
  create(make_record("c", "morpheus"));
  QueryResponse r = run(Role::customer("neo"),
                        GdprQuery::select(Family::kReadData, Dimension::kUsr, "neo"));
  ASSERT_TRUE(r.ok());
  std::set<std::string> keys;
  for (const auto& rec : std::get<RecordList>(r.payload()).items()) keys.insert(rec->key);
  EXPECT_EQ(keys, (std::set<std::string>{"a", "b"}));

  QueryResponse by_pur = run(Role::customer("neo"),
                             GdprQuery::select(Family::kReadData, Dimension::kPur, "ads"));
  EXPECT_EQ(by_pur.touched(), 2u);
}

TEST_F(ServiceTest, CustomerCannotTouchAnotherUsersKey) {
  create(make_record("m", "morpheus"));
  QueryResponse r = run(Role::customer("neo"),
                        GdprQuery::select(Family::kDeleteRecord, Dimension::kKey, "m"));
  EXPECT_EQ(r.code(), ErrorCode::kDenied);
  EXPECT_EQ(r.message(), "not-owner");
  EXPECT_EQ(service_.store().size(), 1u);
  QueryResponse own = run(Role::customer("morpheus"),
                          GdprQuery::select(Family::kDeleteRecord, Dimension::kKey, "m"));
  EXPECT_TRUE(own.ok());
}

TEST_F(ServiceTest, CustomerObjectionEditsAreOwnerScoped) {
  create(make_record("a", "neo"));
  create(make_record("c", "morpheus"));
  QueryResponse r = run(Role::customer("neo"),
                        GdprQuery::update_metadata(Dimension::kPur, "ads",
                                                   {Attribute::kObj, EditOp::kAdd, {"ads"}}));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(std::get<uint64_t>(r.payload()), 1u);
  EXPECT_EQ(service_.store().peek("c")->meta.obj.size(), 0u);
}

TEST_F(ServiceTest, InvalidPairsAreMalformedAndAudited) {
  int valid = 0;
  for (Family f : kAllFamilies) {
    for (Dimension d : kAllDimensions) {
      GdprQuery q = GdprQuery::select(f, d, "k");
      q.new_data = "x";
      if (f == Family::kCreateRecord) q.record = make_record("new" + std::to_string(valid), "u");
      std::size_t before = service_.audit().size();
      QueryResponse r = run(Role::controller(), q);
      EXPECT_EQ(service_.audit().size(), before + 1);
      if (!is_valid_pair(f, d)) {
        EXPECT_EQ(r.code(), ErrorCode::kMalformed) << q.name();
        continue;
      }
      ++valid;
      EXPECT_NE(r.code(), ErrorCode::kMalformed) << q.name();
      EXPECT_NE(r.code(), ErrorCode::kDenied) << q.name();
    }
  }
  EXPECT_EQ(valid, 21);
}

TEST_F(ServiceTest, VerifyDeletionAfterReap) {
  create(make_record("short", "u", {"a"}, 2));
  create(make_record("long", "u", {"a"}, 1000));
  Role regulator = Role::regulator("ico");
  auto status = [&](const std::string& key) {
    QueryResponse r = run(regulator, GdprQuery::verify_deletion(key));
    EXPECT_TRUE(r.ok()) << r.message();
    return std::get<DeletionStatus>(r.payload());
  };
  EXPECT_FALSE(status("short").erased);
  service_.logical_clock()->advance(2300);
  EXPECT_EQ(service_.reap(), 1u);
  DeletionStatus s = status("short");
  EXPECT_TRUE(s.erased);
  EXPECT_EQ(s.latency_ms, 300);
  EXPECT_FALSE(status("long").erased);
  EXPECT_EQ(run(regulator, GdprQuery::verify_deletion("nope")).code(), ErrorCode::kUnknownKey);
  bool saw_reap = false;
  for (const auto& e : service_.audit().entries()) {
    if (e.op == "TTL-REAP") {
      saw_reap = true;
      EXPECT_EQ(e.role, "CONTROLLER");
      EXPECT_EQ(e.count, 1u);
    }
  }
  EXPECT_TRUE(saw_reap);
}

TEST_F(ServiceTest, ExplicitDeleteLatencyIsZero) {
  create(make_record("k", "u"));
  ASSERT_TRUE(run(Role::controller(), GdprQuery::select(Family::kDeleteRecord, Dimension::kKey, "k")).ok());
  QueryResponse r = run(Role::regulator("ico"), GdprQuery::verify_deletion("k"));
  DeletionStatus s = std::get<DeletionStatus>(r.payload());
  EXPECT_TRUE(s.erased);
  EXPECT_EQ(s.latency_ms, 0);
  EXPECT_EQ(s.deletion_seq, 2u);
}

TEST_F(ServiceTest, AuditSelectorNeverCarriesPayload) {
  create(make_record("k", "u", {"a"}, 100, "secret-value"));
  run(Role::controller(), GdprQuery::update_data("k", "other-secret"));
  for (const auto& e : service_.audit().entries()) {
    EXPECT_EQ(e.selector.find("secret"), std::string::npos) << e.selector;
  }
}

TEST(FeatureReportTest, ReflectsConfiguration) {
  testing::TempDir dir("features");
  ServiceConfig all_on = logical_service();
  all_on.store.persistence = Persistence::kAppendLog;
  all_on.store.at_rest_transform = AtRestTransform::kEncrypted;
  all_on.store.at_rest_key = "k";
  all_on.store.data_dir = dir.path();
  {
    GdprService service(all_on);
    FeatureReport report = service.get_system_features();
    for (Capability c : kAllCapabilities) EXPECT_EQ(report.get(c), Support::kFull) << capability_name(c);
  }

  ServiceConfig plain = logical_service();
  EXPECT_EQ(GdprService(plain).get_system_features().get(Capability::kEncryption), Support::kNone);

  ServiceConfig usr_only = logical_service();
  usr_only.store.index_attributes = {IndexedAttribute::kUsr};
  EXPECT_EQ(GdprService(usr_only).get_system_features().get(Capability::kMetadataIndexing),
            Support::kPartial);

  ServiceConfig lax = logical_service();
  lax.store.reap_interval_ms = 5000;
  lax.auditing = false;
  FeatureReport report = GdprService(lax).get_system_features();
  EXPECT_EQ(report.get(Capability::kTtl), Support::kPartial);
  EXPECT_EQ(report.get(Capability::kAuditing), Support::kNone);
  EXPECT_EQ(report.get(Capability::kAccessControl), Support::kFull);
}

TEST(ServicePersistenceTest, VerifyDeletionSurvivesRestart) {
  testing::TempDir dir("service");
  ServiceConfig config = logical_service();
  config.store.persistence = Persistence::kAppendLog;
  config.store.data_dir = dir.path();
  {
    GdprService service(config);
    service.execute(Role::controller(), GdprQuery::create(make_record("k", "u")));
    service.execute(Role::controller(), GdprQuery::create(make_record("j", "u")));
    service.execute(Role::controller(), GdprQuery::select(Family::kDeleteRecord, Dimension::kKey, "k"));
  }
  GdprService service(config);
  EXPECT_EQ(service.audit().size(), 3u);
  auto status = [&](const char* key) {
    return std::get<DeletionStatus>(
        service.execute(Role::regulator("ico"), GdprQuery::verify_deletion(key)).payload());
  };
  EXPECT_TRUE(status("k").erased);
  EXPECT_FALSE(status("j").erased);
}

}  // namespace
}  // namespace pds
