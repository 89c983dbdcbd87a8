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

#include "pds/driver.hpp"
#include "pds/error.hpp"
#include "pds/server.hpp"
#include "pds/wire.hpp"
#include "test_util.hpp"

namespace pds {
namespace {

using testing::make_record;

std::vector<GdprQuery> sample_queries() {
  std::vector<GdprQuery> qs;
  qs.push_back(GdprQuery::create(parse_record(testing::kExampleLine)));
  qs.push_back(GdprQuery::select(Family::kDeleteRecord, Dimension::kTtl));
  qs.push_back(GdprQuery::select(Family::kReadData, Dimension::kDec));
  qs.push_back(GdprQuery::select(Family::kReadData, Dimension::kObj, "ads"));
  qs.push_back(GdprQuery::select(Family::kReadMetadata, Dimension::kShr, "acme"));
  qs.push_back(GdprQuery::update_data("k1", "new value with spaces"));
  qs.push_back(GdprQuery::update_metadata(Dimension::kPur, "ads", {Attribute::kShr, EditOp::kAdd, {"a", "b"}}));
  qs.push_back(GdprQuery::update_metadata(Dimension::kKey, "k", {Attribute::kObj, EditOp::kSet, {}}));
  qs.push_back(GdprQuery::system_logs({5, 900}));
  qs.push_back(GdprQuery::system_features());
  qs.push_back(GdprQuery::verify_deletion("k9"));
  return qs;
}

TEST(WireRequestTest, RoundTripsEveryShape) {
  for (const GdprQuery& q : sample_queries()) {
    std::string line = format_request(Role::customer("neo"), q);
    WireRequest back = parse_request(line);
    EXPECT_EQ(back.role, Role::customer("neo")) << line;
    EXPECT_EQ(back.query, q) << line;
  }
  EXPECT_EQ(format_request(Role::controller(), GdprQuery::select(Family::kReadData, Dimension::kKey, "k")),
            "REQ CONTROLLER READ-DATA-BY-KEY k");
  EXPECT_EQ(format_request(Role::regulator("ico"), GdprQuery::system_logs({1, 2})),
            "REQ REGULATOR:ico GET-SYSTEM-LOGS 1;2");
}

TEST(WireRequestTest, RejectsGarbageButKeepsInvalidPairs) {
  EXPECT_THROW(parse_request("HELLO"), Error);
  EXPECT_THROW(parse_request("REQ NOBODY READ-DATA-BY-KEY k"), Error);
  EXPECT_THROW(parse_request("REQ CONTROLLER READ-EVERYTHING k"), Error);
  EXPECT_THROW(parse_request("REQ CONTROLLER CREATE-RECORD k;d"), Error);
  EXPECT_THROW(parse_request("REQ CONTROLLER GET-SYSTEM-LOGS 1;x"), Error);
  WireRequest odd = parse_request("REQ CONTROLLER READ-DATA-BY-SHR p");
  EXPECT_FALSE(is_valid_pair(odd.query.family, odd.query.dimension));
}

TEST(WireResponseTest, RoundTripsPayloads) {
  Role controller = Role::controller();
  auto rec = std::make_shared<const PersonalRecord>(parse_record(testing::kExampleLine));
  struct Case {
    GdprQuery query;
    QueryResponse response;
  };
  FeatureReport features;
  features.set(Capability::kTtl, Support::kFull);
  features.set(Capability::kMetadataIndexing, Support::kPartial);
  std::vector<Case> cases = {
      {GdprQuery::select(Family::kReadData, Dimension::kUsr, "neo"), QueryResponse::records(controller, {rec})},
      {GdprQuery::select(Family::kReadMetadata, Dimension::kUsr, "neo"),
       QueryResponse::metadata({{rec->key, rec->meta}})},
      {GdprQuery::select(Family::kDeleteRecord, Dimension::kUsr, "neo"), QueryResponse::count(42)},
      {GdprQuery::system_logs({0, 10}),
       QueryResponse::logs({{1, 2, "CONTROLLER", "-", "CREATE-RECORD", "KEY=k", "OK", 1}})},
      {GdprQuery::verify_deletion("k"), QueryResponse::deletion({true, 7, 250})},
      {GdprQuery::verify_deletion("k"), QueryResponse::deletion({false, std::nullopt, std::nullopt})},
      {GdprQuery::system_features(), QueryResponse::features(features)},
      {GdprQuery::select(Family::kReadData, Dimension::kKey, "x"),
       QueryResponse::error(ErrorCode::kNotFound, "no live record\nhere")},
  };
  for (const auto& c : cases) {
    std::vector<std::string> lines = format_response(c.response);
    std::vector<std::string> body(lines.begin() + 1, lines.end());
    QueryResponse back = parse_response(controller, c.query, lines[0], body);
    EXPECT_EQ(back.code(), c.response.code()) << lines[0];
    EXPECT_EQ(back.kind(), c.response.kind()) << lines[0];
    EXPECT_EQ(format_response(back), lines);
  }
}

TEST(WireResponseTest, BodySizeMismatchIsMalformed) {
  EXPECT_THROW(parse_response(Role::controller(), GdprQuery::verify_deletion("k"), "OK 2",
                              {"erased=1;seq=-;latency_ms=-;"}),
               Error);
  EXPECT_THROW(response_body_size("WHAT"), Error);
}

TEST(WireResponseTest, RegulatorCannotReceiveRecordsFromTheWire) {
  QueryResponse r = parse_response(Role::regulator("ico"),
                                   GdprQuery::select(Family::kReadData, Dimension::kKey, "k"),
                                   "OK 1", {testing::kExampleLine});
  EXPECT_EQ(r.code(), ErrorCode::kDenied);
}

TEST(SpaceStatsLineTest, RoundTrips) {
  SpaceStats s{10, 35, 3.5, 4, 20, 1, 2};
  SpaceStats back = parse_space_stats(format_space_stats(s));
  EXPECT_EQ(back.total_db_bytes, 35u);
  EXPECT_EQ(back.record_count, 2u);
  EXPECT_DOUBLE_EQ(back.space_factor, 3.5);
}

std::shared_ptr<GdprService> logical_service() {
  ServiceConfig config;
  config.store = testing::logical_config();
  return std::make_shared<GdprService>(config);
}

TEST(WireServerTest, SessionNeedsHello) {
  auto service = logical_service();
  WireServer server(service, "127.0.0.1", 0);
  bool hello = false;
  bool quit = false;
  EXPECT_EQ(server.handle_line("REAP", &hello, &quit)[0].substr(0, 13), "ERR MALFORMED");
  EXPECT_EQ(server.handle_line("HELLO CONTROLLER", &hello, &quit), std::vector<std::string>{"OK 0"});
  EXPECT_EQ(server.handle_line("TICK 25", &hello, &quit), (std::vector<std::string>{"OK 1", "25"}));
  EXPECT_EQ(server.handle_line("REQ CONTROLLER CREATE-RECORD k;d;PUR=;TTL=1;USR=u;OBJ=;DEC=;SHR=;SRC=;",
                               &hello, &quit),
            (std::vector<std::string>{"OK 1", "1"}));
  EXPECT_EQ(server.handle_line("REQ CONTROLLER READ-DATA-BY-SHR p", &hello, &quit)[0].substr(0, 13),
            "ERR MALFORMED");
  EXPECT_EQ(server.handle_line("REQ CONTROLLER UPDATE-DATA-BY-KEY nope", &hello, &quit)[0].substr(0, 13),
            "ERR MALFORMED");
  EXPECT_EQ(server.handle_line("STATS", &hello, &quit)[1].substr(0, 10), "records=1;");
  EXPECT_EQ(service->audit().size(), 2u);
  server.handle_line("QUIT", &hello, &quit);
  EXPECT_TRUE(quit);
  server.stop();
}

TEST(RemoteDriverTest, MatchesEmbeddedOverTcp) {
  auto served = logical_service();
  WireServer server(served, "127.0.0.1", 0);
  RemoteDriver remote("127.0.0.1", server.port());
  EmbeddedDriver embedded(logical_service());

  std::vector<std::pair<Role, GdprQuery>> script = {
      {Role::controller(), GdprQuery::create(make_record("a", "neo", {"ads"}, 5))},
      {Role::controller(), GdprQuery::create(make_record("b", "neo", {"2fa"}, 100))},
      {Role::controller(), GdprQuery::create(make_record("c", "trinity", {"ads"}, 100))},
      {Role::customer("neo"), GdprQuery::select(Family::kReadData, Dimension::kUsr, "neo")},
      {Role::customer("neo"), GdprQuery::select(Family::kReadData, Dimension::kKey, "c")},
      {Role::processor("ml"), GdprQuery::select(Family::kReadData, Dimension::kPur, "ads")},
      {Role::regulator("ico"), GdprQuery::select(Family::kReadData, Dimension::kPur, "ads")},
      {Role::regulator("ico"), GdprQuery::select(Family::kReadMetadata, Dimension::kUsr, "neo")},
      {Role::controller(), GdprQuery::update_metadata(Dimension::kUsr, "neo", {Attribute::kShr, EditOp::kAdd, {"x"}})},
      {Role::regulator("ico"), GdprQuery::verify_deletion("a")},
      {Role::controller(), GdprQuery::select(Family::kDeleteRecord, Dimension::kKey, "zzz")},
      {Role::controller(), GdprQuery::system_features()},
  };
  for (const auto& [role, q] : script) {
    QueryResponse want = embedded.execute(role, q);
    QueryResponse got = remote.execute(role, q);
    EXPECT_EQ(got.code(), want.code()) << q.name();
    if (want.ok()) {
      std::vector<std::string> a = format_response(want);
      std::vector<std::string> b = format_response(got);
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      EXPECT_EQ(a, b) << q.name();
    }
  }
  EXPECT_EQ(remote.advance_clock(6000), embedded.advance_clock(6000));
  EXPECT_EQ(remote.reap(), 1u);
  EXPECT_EQ(embedded.reap(), 1u);
  EXPECT_EQ(remote.space_stats().total_db_bytes, embedded.space_stats().total_db_bytes);
  QueryResponse logs = remote.execute(Role::regulator("ico"), GdprQuery::system_logs({0, 100000}));
  EXPECT_EQ(logs.touched(), served->audit().size() - 1);
}

TEST(RemoteDriverTest, UnreachableServer) {
  uint16_t port = 0;
  {
    WireServer probe(logical_service(), "127.0.0.1", 0);
    port = probe.port();
  }
  try {
    RemoteDriver driver("127.0.0.1", port);
    FAIL() << "connected to a closed port";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDriverUnreachable);
  }
}

TEST(AddressTest, Parses) {
  EXPECT_EQ(parse_address("localhost:7070"), (std::pair<std::string, uint16_t>{"localhost", 7070}));
  EXPECT_THROW(parse_address("7070"), Error);
  EXPECT_THROW(parse_address("h:99999"), Error);
}

}  // namespace
}  // namespace pds
