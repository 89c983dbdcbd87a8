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

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

namespace pds {

// Sorted, so canonical serialization falls out of iteration order.
using TokenSet = std::set<std::string, std::less<>>;

enum class Attribute { kPur, kTtl, kUsr, kObj, kDec, kShr, kSrc };

inline constexpr Attribute kCanonicalOrder[] = {
    Attribute::kPur, Attribute::kTtl, Attribute::kUsr, Attribute::kObj,
    Attribute::kDec, Attribute::kShr, Attribute::kSrc};

// Objection token a customer places in OBJ to withdraw from automated
// decision-making.
inline constexpr std::string_view kAutomatedObjection = "automated";

std::string_view attribute_name(Attribute attr);
std::optional<Attribute> parse_attribute(std::string_view name);

// Printable ASCII, non-empty, no ';' or ','.
bool is_valid_token(std::string_view token);

struct Metadata {
  TokenSet pur;
  int64_t ttl = 0;  // seconds from creation
  std::string usr;
  TokenSet obj;
  TokenSet dec;
  TokenSet shr;
  TokenSet src;

  bool operator==(const Metadata&) const = default;

  // Set-valued attributes only; kTtl and kUsr are rejected.
  const TokenSet& tokens(Attribute attr) const;
  TokenSet& tokens(Attribute attr);

  // Bytes of attribute values: token lengths plus 8 for the TTL scalar.
  std::size_t value_bytes() const;
};

struct PersonalRecord {
  std::string key;
  std::string data;
  Metadata meta;
  int64_t created_at_ms = 0;

  bool operator==(const PersonalRecord&) const = default;

  int64_t expiry_ms() const { return created_at_ms + meta.ttl * 1000; }
  bool same_content(const PersonalRecord& other) const {
    return key == other.key && data == other.data && meta == other.meta;
  }
};

// Largest TTL whose millisecond form still fits in int64.
inline constexpr int64_t kMaxTtlSeconds = INT64_MAX / 1000 / 2;

// Throws Error(kMalformed) on any violation of the token rules.
void validate_metadata(const Metadata& meta);
void validate_record(const PersonalRecord& record);

// Parses `key;data;PUR=..;TTL=..;USR=..;OBJ=..;DEC=..;SHR=..;SRC=..;`.
// Attribute order is free; all seven must appear exactly once. The empty
// set is an empty value list; `∅` and `null` are accepted as aliases.
// created_at_ms of the result is 0. Throws Error(kMalformed).
PersonalRecord parse_record(std::string_view line);

std::string serialize_record(const PersonalRecord& record);

// `key;PUR=..;...;SRC=..;` -- the record line without its data field.
std::string serialize_metadata(std::string_view key, const Metadata& meta);
std::pair<std::string, Metadata> parse_metadata_line(std::string_view line);

// Parses a comma-separated value list with the same empty-set aliases as the
// record format.
TokenSet parse_value_list(std::string_view values);
std::string join_values(const TokenSet& values);

}  // namespace pds
