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

#include <random>

#include <gtest/gtest.h>

#include "pds/error.hpp"
#include "pds/record.hpp"
#include "test_util.hpp"

namespace pds {
namespace {

using testing::kExampleLine;
using testing::random_token;

ErrorCode parse_error(std::string_view line) {
  try {
    parse_record(line);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

TEST(RecordTest, ParsesExampleRecordFieldByField) {
  PersonalRecord r = parse_record(kExampleLine);
  EXPECT_EQ(r.key, "ph-1x4b");
  EXPECT_EQ(r.data, "123-456-7890");
  EXPECT_EQ(r.meta.pur, (TokenSet{"2fa", "ads"}));
  EXPECT_EQ(r.meta.ttl, 7776000);
  EXPECT_EQ(r.meta.usr, "neo");
  EXPECT_TRUE(r.meta.obj.empty());
  EXPECT_TRUE(r.meta.dec.empty());
  EXPECT_TRUE(r.meta.shr.empty());
  EXPECT_EQ(r.meta.src, (TokenSet{"first-party"}));
  EXPECT_EQ(r.created_at_ms, 0);
}

TEST(RecordTest, ExampleSerializesWithSortedSets) {
  // Sorted canonical order puts 2fa before ads.
  EXPECT_EQ(serialize_record(parse_record(kExampleLine)),
            "ph-1x4b;123-456-7890;PUR=2fa,ads;TTL=7776000;USR=neo;OBJ=;DEC=;SHR=;SRC=first-party;");
}

TEST(RecordTest, CanonicalLineRoundTrips) {
  const std::string line = "k1;d1;PUR=a;TTL=0;USR=u;OBJ=a,b;DEC=x;SHR=p1,p2;SRC=s;";
  PersonalRecord r = parse_record(line);
  EXPECT_EQ(r.meta.obj, (TokenSet{"a", "b"}));
  EXPECT_EQ(r.meta.shr, (TokenSet{"p1", "p2"}));
  EXPECT_EQ(r.meta.dec, (TokenSet{"x"}));
  EXPECT_EQ(serialize_record(r), line);
}

TEST(RecordTest, EmptySetsRenderAsEmptyValueLists) {
  PersonalRecord r;
  r.key = "k";
  r.data = "d";
  r.meta.ttl = 5;
  r.meta.usr = "u";
  EXPECT_EQ(serialize_record(r), "k;d;PUR=;TTL=5;USR=u;OBJ=;DEC=;SHR=;SRC=;");
}

TEST(RecordTest, AcceptsEmptySetAliasesButNeverEmitsThem) {
  PersonalRecord a = parse_record("k;d;PUR=null;TTL=1;USR=u;OBJ=\xE2\x88\x85;DEC=;SHR=;SRC=s;");
  EXPECT_TRUE(a.meta.pur.empty());
  EXPECT_TRUE(a.meta.obj.empty());
  EXPECT_EQ(serialize_record(a), "k;d;PUR=;TTL=1;USR=u;OBJ=;DEC=;SHR=;SRC=s;");
}

TEST(RecordTest, AttributeOrderInInputIsFree) {
  PersonalRecord r = parse_record("k;d;SRC=s;USR=u;TTL=9;PUR=b,a;SHR=;DEC=;OBJ=;");
  EXPECT_EQ(serialize_record(r), "k;d;PUR=a,b;TTL=9;USR=u;OBJ=;DEC=;SHR=;SRC=s;");
}

TEST(RecordTest, RejectsMalformedLines) {
  EXPECT_EQ(parse_error(""), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;PUR=a;TTL=1;USR=u;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error(";d;PUR=a;TTL=1;USR=u;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d;PUR=a;TTL=1;USR=u;OBJ=;DEC=;SHR=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d;PUR=a;TTL=1;USR=u;OBJ=;DEC=;SHR=;SRC=;XYZ=1;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d;PUR=a;PUR=b;TTL=1;USR=u;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d;PUR=a;TTL=1h;USR=u;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d;PUR=a;TTL=-1;USR=u;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d;PUR=a;TTL=1;USR=;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d;PUR=a;TTL=1;USR=u,v;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d;PUR=a,,b;TTL=1;USR=u;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
  EXPECT_EQ(parse_error("k;d\x01;PUR=a;TTL=1;USR=u;OBJ=;DEC=;SHR=;SRC=;"), ErrorCode::kMalformed);
}

TEST(RecordTest, SeparatorInsideTokenIsRejectedNotTruncated) {
  PersonalRecord r = testing::make_record("k", "u");
  r.data = "a;b";
  EXPECT_THROW(validate_record(r), Error);
  r.data = "a,b";
  EXPECT_THROW(validate_record(r), Error);
  r.data = "ok";
  r.meta.pur = {"x,y"};
  EXPECT_THROW(validate_record(r), Error);
}

TEST(RecordTest, MetadataLineOmitsData) {
  PersonalRecord r = parse_record(kExampleLine);
  std::string line = serialize_metadata(r.key, r.meta);
  EXPECT_EQ(line, "ph-1x4b;PUR=2fa,ads;TTL=7776000;USR=neo;OBJ=;DEC=;SHR=;SRC=first-party;");
  EXPECT_EQ(line.find("123-456-7890"), std::string::npos);
  auto [key, meta] = parse_metadata_line(line);
  EXPECT_EQ(key, r.key);
  EXPECT_EQ(meta, r.meta);
}

TEST(RecordTest, ValueBytesCountTokensAndTtlScalar) {
  PersonalRecord r = parse_record(kExampleLine);
  // 3 + 3 (pur) + 3 (usr) + 11 (src) + 8 (ttl)
  EXPECT_EQ(r.meta.value_bytes(), 28u);
}

TEST(RecordTest, ExpiryIsCreationPlusTtl) {
  PersonalRecord r = testing::make_record("k", "u", {"a"}, 7);
  r.created_at_ms = 1000;
  EXPECT_EQ(r.expiry_ms(), 8000);
}

TEST(RecordPropertyTest, RandomRecordsRoundTrip) {
  std::mt19937_64 rng(20260101);
  auto random_set = [&]() {
    TokenSet s;
    std::uniform_int_distribution<int> n(0, 4);
    for (int i = n(rng); i > 0; --i) s.insert(random_token(rng));
    return s;
  };
  std::uniform_int_distribution<int64_t> ttl(0, kMaxTtlSeconds);
  for (int i = 0; i < 1000; ++i) {
    PersonalRecord r;
    r.key = random_token(rng);
    r.data = random_token(rng, 40);
    r.meta.pur = random_set();
    r.meta.ttl = ttl(rng);
    r.meta.usr = random_token(rng);
    r.meta.obj = random_set();
    r.meta.dec = random_set();
    r.meta.shr = random_set();
    r.meta.src = random_set();
    std::string line = serialize_record(r);
    PersonalRecord back = parse_record(line);
    ASSERT_EQ(back, r) << line;
    ASSERT_EQ(serialize_record(back), line);
  }
}

}  // namespace
}  // namespace pds
