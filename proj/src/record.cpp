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

#include "pds/record.hpp"

#include <array>
#include <charconv>
#include <vector>

#include "pds/error.hpp"

namespace pds {

namespace {

constexpr std::string_view kEmptySetSymbol = "\xE2\x88\x85";  // U+2205
constexpr std::string_view kNullAlias = "null";

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformed, what);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// Drops the single empty segment produced by the terminating ';'.
std::vector<std::string_view> split_fields(std::string_view line) {
  auto fields = split(line, ';');
  if (fields.size() > 1 && fields.back().empty()) fields.pop_back();
  return fields;
}

void require_token(std::string_view token, const char* field) {
  if (!is_valid_token(token)) {
    malformed(std::string("invalid token in ") + field + ": '" +
              std::string(token) + "'");
  }
}

int64_t parse_ttl(std::string_view text) {
  int64_t ttl = 0;
  if (text.empty() || text.front() == '-' || text.front() == '+') {
    malformed("TTL must be a non-negative integer");
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ttl);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    malformed("TTL must be a non-negative integer: '" + std::string(text) + "'");
  }
  if (ttl > kMaxTtlSeconds) malformed("TTL out of range");
  return ttl;
}

// Parses the seven NAME=values segments into meta.
void parse_attributes(const std::vector<std::string_view>& fields,
                      std::size_t first, Metadata* meta) {
  std::array<bool, 7> seen{};
  for (std::size_t i = first; i < fields.size(); ++i) {
    std::string_view field = fields[i];
    std::size_t eq = field.find('=');
    if (eq == std::string_view::npos) {
      malformed("attribute without '=': '" + std::string(field) + "'");
    }
    auto attr = parse_attribute(field.substr(0, eq));
    if (!attr) {
      malformed("unknown attribute '" + std::string(field.substr(0, eq)) + "'");
    }
    auto slot = static_cast<std::size_t>(*attr);
    if (seen[slot]) {
      malformed("duplicate attribute " + std::string(attribute_name(*attr)));
    }
    seen[slot] = true;
    std::string_view value = field.substr(eq + 1);
    switch (*attr) {
      case Attribute::kTtl:
        meta->ttl = parse_ttl(value);
        break;
      case Attribute::kUsr:
        require_token(value, "USR");
        meta->usr = std::string(value);
        break;
      default:
        meta->tokens(*attr) = parse_value_list(value);
        break;
    }
  }
  for (Attribute attr : kCanonicalOrder) {
    if (!seen[static_cast<std::size_t>(attr)]) {
      malformed("missing attribute " + std::string(attribute_name(attr)));
    }
  }
}

void append_attributes(const Metadata& meta, std::string* out) {
  for (Attribute attr : kCanonicalOrder) {
    out->append(attribute_name(attr));
    out->push_back('=');
    if (attr == Attribute::kTtl) {
      out->append(std::to_string(meta.ttl));
    } else if (attr == Attribute::kUsr) {
      out->append(meta.usr);
    } else {
      out->append(join_values(meta.tokens(attr)));
    }
    out->push_back(';');
  }
}

}  // namespace

std::string_view attribute_name(Attribute attr) {
  switch (attr) {
    case Attribute::kPur: return "PUR";
    case Attribute::kTtl: return "TTL";
    case Attribute::kUsr: return "USR";
    case Attribute::kObj: return "OBJ";
    case Attribute::kDec: return "DEC";
    case Attribute::kShr: return "SHR";
    case Attribute::kSrc: return "SRC";
  }
  return "";
}

std::optional<Attribute> parse_attribute(std::string_view name) {
  for (Attribute attr : kCanonicalOrder) {
    if (attribute_name(attr) == name) return attr;
  }
  return std::nullopt;
}

bool is_valid_token(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u > 0x7E || c == ';' || c == ',') return false;
  }
  return true;
}

const TokenSet& Metadata::tokens(Attribute attr) const {
  switch (attr) {
    case Attribute::kPur: return pur;
    case Attribute::kObj: return obj;
    case Attribute::kDec: return dec;
    case Attribute::kShr: return shr;
    case Attribute::kSrc: return src;
    default:
      throw Error(ErrorCode::kInvalidAttribute,
                  std::string(attribute_name(attr)) + " is not set-valued");
  }
}

TokenSet& Metadata::tokens(Attribute attr) {
  return const_cast<TokenSet&>(std::as_const(*this).tokens(attr));
}

std::size_t Metadata::value_bytes() const {
  std::size_t bytes = sizeof(int64_t) + usr.size();
  for (const TokenSet* set : {&pur, &obj, &dec, &shr, &src}) {
    for (const auto& token : *set) bytes += token.size();
  }
  return bytes;
}

void validate_metadata(const Metadata& meta) {
  require_token(meta.usr, "USR");
  if (meta.ttl < 0 || meta.ttl > kMaxTtlSeconds) malformed("TTL out of range");
  for (Attribute attr : kCanonicalOrder) {
    if (attr == Attribute::kTtl || attr == Attribute::kUsr) continue;
    for (const auto& token : meta.tokens(attr)) {
      require_token(token, attribute_name(attr).data());
    }
  }
}

void validate_record(const PersonalRecord& record) {
  require_token(record.key, "key");
  require_token(record.data, "data");
  validate_metadata(record.meta);
}

TokenSet parse_value_list(std::string_view values) {
  TokenSet set;
  if (values.empty() || values == kEmptySetSymbol || values == kNullAlias) {
    return set;
  }
  for (std::string_view token : split(values, ',')) {
    require_token(token, "value list");
    set.emplace(token);
  }
  return set;
}

std::string join_values(const TokenSet& values) {
  std::string out;
  for (const auto& token : values) {
    if (!out.empty()) out.push_back(',');
    out.append(token);
  }
  return out;
}

PersonalRecord parse_record(std::string_view line) {
  auto fields = split_fields(line);
  if (fields.size() < 2) malformed("record needs key and data");
  PersonalRecord record;
  require_token(fields[0], "key");
  require_token(fields[1], "data");
  if (fields[1].find('=') != std::string_view::npos &&
      parse_attribute(fields[1].substr(0, fields[1].find('=')))) {
    malformed("missing data field");
  }
  record.key = std::string(fields[0]);
  record.data = std::string(fields[1]);
  parse_attributes(fields, 2, &record.meta);
  return record;
}

std::string serialize_record(const PersonalRecord& record) {
  std::string out;
  out.reserve(record.key.size() + record.data.size() + 64);
  out.append(record.key).push_back(';');
  out.append(record.data).push_back(';');
  append_attributes(record.meta, &out);
  return out;
}

std::string serialize_metadata(std::string_view key, const Metadata& meta) {
  std::string out;
  out.reserve(key.size() + 64);
  out.append(key).push_back(';');
  append_attributes(meta, &out);
  return out;
}

std::pair<std::string, Metadata> parse_metadata_line(std::string_view line) {
  auto fields = split_fields(line);
  if (fields.empty()) malformed("metadata line needs a key");
  require_token(fields[0], "key");
  Metadata meta;
  parse_attributes(fields, 1, &meta);
  return {std::string(fields[0]), std::move(meta)};
}

}  // namespace pds
