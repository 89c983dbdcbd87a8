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

#include "pds/wire.hpp"

#include <sys/socket.h>
#include <sys/types.h>

#include <cerrno>
#include <charconv>
#include <memory>

#include "pds/error.hpp"

namespace pds {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformed, what);
}

template <typename T>
T parse_int(std::string_view text, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    malformed(std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

// Splits off the text before the first `sep`; `rest` keeps what follows.
std::string_view take(std::string_view* rest, char sep) {
  std::size_t pos = rest->find(sep);
  std::string_view head = rest->substr(0, pos);
  rest->remove_prefix(pos == std::string_view::npos ? rest->size() : pos + 1);
  return head;
}

bool has_token_argument(Dimension dim) {
  return dim != Dimension::kTtl && dim != Dimension::kDec && dim != Dimension::kNone &&
         dim != Dimension::kFeatures && dim != Dimension::kLogs;
}

std::string single_line(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::string optional_field(const std::optional<int64_t>& v) {
  return v ? std::to_string(*v) : "-";
}

}  // namespace

std::string format_request(const Role& role, const GdprQuery& q) {
  std::string line = "REQ " + role.to_string() + " " + q.name();
  std::string args;
  switch (q.family) {
    case Family::kCreateRecord:
      if (q.record) args = serialize_record(*q.record);
      break;
    case Family::kUpdateData:
      args = q.token + ";" + q.new_data;
      break;
    case Family::kUpdateMetadata:
      args = q.token + ";" + std::string(attribute_name(q.edit.attribute)) + ";" +
             std::string(edit_op_name(q.edit.op)) + ";" + join_values(q.edit.values);
      break;
    case Family::kGetSystem:
      if (q.dimension == Dimension::kLogs) {
        args = std::to_string(q.range.start_ms) + ";" + std::to_string(q.range.end_ms);
      }
      break;
    default:
      if (has_token_argument(q.dimension)) args = q.token;
      break;
  }
  if (!args.empty()) line.append(" ").append(args);
  return line;
}

WireRequest parse_request(std::string_view line) {
  std::string_view rest = line;
  if (take(&rest, ' ') != "REQ") malformed("expected REQ");
  std::optional<Role> role = parse_role(take(&rest, ' '));
  if (!role) malformed("bad role");
  std::string_view name = take(&rest, ' ');
  auto pair = parse_query_name(name);
  if (!pair) malformed("unknown query '" + std::string(name) + "'");

  WireRequest req{*role, GdprQuery::select(pair->first, pair->second)};
  GdprQuery& q = req.query;
  switch (q.family) {
    case Family::kCreateRecord: {
      PersonalRecord record = parse_record(rest);
      q.token = record.key;
      q.record = std::move(record);
      break;
    }
    case Family::kUpdateData: {
      if (rest.find(';') == std::string_view::npos) malformed("expected <key>;<data>");
      q.token = std::string(take(&rest, ';'));
      q.new_data = std::string(rest);
      break;
    }
    case Family::kUpdateMetadata: {
      q.token = std::string(take(&rest, ';'));
      auto attr = parse_attribute(take(&rest, ';'));
      auto op = parse_edit_op(take(&rest, ';'));
      if (!attr || !op) malformed("expected <token>;<ATTR>;<op>;<values>");
      q.edit = {*attr, *op, parse_value_list(rest)};
      break;
    }
    case Family::kGetSystem:
      if (q.dimension == Dimension::kLogs) {
        q.range.start_ms = parse_int<int64_t>(take(&rest, ';'), "range start");
        q.range.end_ms = parse_int<int64_t>(rest, "range end");
      }
      break;
    default:
      q.token = std::string(rest);
      break;
  }
  return req;
}

std::vector<std::string> format_response(const QueryResponse& r) {
  std::vector<std::string> lines;
  if (!r.ok()) {
    std::string status = "ERR " + std::string(error_code_name(r.code()));
    if (!r.message().empty()) status.append(" ").append(single_line(r.message()));
    lines.push_back(std::move(status));
    return lines;
  }
  lines.emplace_back();
  switch (r.kind()) {
    case PayloadKind::kNone:
      break;
    case PayloadKind::kRecords:
      for (const auto& rec : std::get<RecordList>(r.payload()).items()) {
        lines.push_back(serialize_record(*rec));
      }
      break;
    case PayloadKind::kMetadata:
      for (const auto& e : std::get<std::vector<MetadataEntry>>(r.payload())) {
        lines.push_back(serialize_metadata(e.key, e.meta));
      }
      break;
    case PayloadKind::kCount:
      lines.push_back(std::to_string(std::get<uint64_t>(r.payload())));
      break;
    case PayloadKind::kLogs:
      for (const auto& e : std::get<std::vector<AuditEntry>>(r.payload())) {
        lines.push_back(format_audit_line(e));
      }
      break;
    case PayloadKind::kDeletion:
      lines.push_back(format_deletion_status(std::get<DeletionStatus>(r.payload())));
      break;
    case PayloadKind::kFeatures: {
      const auto& report = std::get<FeatureReport>(r.payload());
      for (Capability c : kAllCapabilities) {
        lines.push_back(std::string(capability_name(c)) + "=" +
                        std::string(support_name(report.get(c))));
      }
      break;
    }
  }
  lines[0] = "OK " + std::to_string(lines.size() - 1);
  return lines;
}

std::optional<std::size_t> response_body_size(std::string_view status) {
  if (status == "ERR" || status.substr(0, 4) == "ERR ") return std::nullopt;
  if (status.substr(0, 3) != "OK ") malformed("bad status line '" + std::string(status) + "'");
  return parse_int<std::size_t>(status.substr(3), "body size");
}

QueryResponse parse_response(const Role& requester, const GdprQuery& q,
                             std::string_view status, const std::vector<std::string>& body) {
  auto size = response_body_size(status);
  if (!size) {
    std::string_view rest = status.substr(std::min<std::size_t>(4, status.size()));
    std::string_view name = take(&rest, ' ');
    ErrorCode code;
    if (!parse_error_code(name, &code) || code == ErrorCode::kOk) {
      malformed("unknown error code '" + std::string(name) + "'");
    }
    return QueryResponse::error(code, std::string(rest));
  }
  if (*size != body.size()) malformed("body size mismatch");

  auto single = [&]() -> const std::string& {
    if (body.size() != 1) malformed("expected one body line");
    return body[0];
  };
  switch (q.family) {
    case Family::kCreateRecord:
    case Family::kDeleteRecord:
    case Family::kUpdateData:
    case Family::kUpdateMetadata:
      return QueryResponse::count(parse_int<uint64_t>(single(), "count"));
    case Family::kReadData: {
      std::vector<RecordPtr> records;
      records.reserve(body.size());
      for (const auto& line : body) {
        records.push_back(std::make_shared<const PersonalRecord>(parse_record(line)));
      }
      return QueryResponse::records(requester, std::move(records));
    }
    case Family::kReadMetadata: {
      std::vector<MetadataEntry> entries;
      entries.reserve(body.size());
      for (const auto& line : body) {
        auto [key, meta] = parse_metadata_line(line);
        entries.push_back({std::move(key), std::move(meta)});
      }
      return QueryResponse::metadata(std::move(entries));
    }
    case Family::kGetSystem:
      if (q.dimension == Dimension::kLogs) {
        std::vector<AuditEntry> entries;
        entries.reserve(body.size());
        for (const auto& line : body) entries.push_back(parse_audit_line(line));
        return QueryResponse::logs(std::move(entries));
      } else {
        FeatureReport report;
        std::vector<bool> seen(std::size(kAllCapabilities), false);
        for (const auto& line : body) {
          std::string_view rest = line;
          auto cap = parse_capability(take(&rest, '='));
          auto level = parse_support(rest);
          if (!cap || !level) malformed("bad feature line '" + line + "'");
          report.set(*cap, *level);
          seen[static_cast<std::size_t>(*cap)] = true;
        }
        for (bool s : seen) {
          if (!s) malformed("feature report is missing a capability");
        }
        return QueryResponse::features(report);
      }
    case Family::kVerifyDeletion:
      return QueryResponse::deletion(parse_deletion_status(single()));
  }
  malformed("unexpected response");
}

std::string format_deletion_status(const DeletionStatus& s) {
  std::optional<int64_t> seq;
  if (s.deletion_seq) seq = static_cast<int64_t>(*s.deletion_seq);
  return std::string("erased=") + (s.erased ? "1" : "0") + ";seq=" + optional_field(seq) +
         ";latency_ms=" + optional_field(s.latency_ms) + ";";
}

DeletionStatus parse_deletion_status(std::string_view line) {
  DeletionStatus s;
  std::string_view rest = line;
  bool have_erased = false;
  while (!rest.empty()) {
    std::string_view field = take(&rest, ';');
    std::string_view name = take(&field, '=');
    if (name == "erased") {
      if (field != "0" && field != "1") malformed("bad erased flag");
      s.erased = field == "1";
      have_erased = true;
    } else if (name == "seq") {
      if (field != "-") s.deletion_seq = parse_int<uint64_t>(field, "seq");
    } else if (name == "latency_ms") {
      if (field != "-") s.latency_ms = parse_int<int64_t>(field, "latency");
    } else {
      malformed("unknown deletion field '" + std::string(name) + "'");
    }
  }
  if (!have_erased) malformed("deletion status lacks erased flag");
  return s;
}

std::string format_space_stats(const SpaceStats& s) {
  return "records=" + std::to_string(s.record_count) +
         ";personal=" + std::to_string(s.personal_data_bytes) +
         ";keys=" + std::to_string(s.key_bytes) +
         ";metadata=" + std::to_string(s.metadata_bytes) +
         ";index=" + std::to_string(s.index_bytes) +
         ";total=" + std::to_string(s.total_db_bytes) + ";";
}

SpaceStats parse_space_stats(std::string_view line) {
  SpaceStats s;
  std::string_view rest = line;
  while (!rest.empty()) {
    std::string_view field = take(&rest, ';');
    std::string_view name = take(&field, '=');
    uint64_t v = parse_int<uint64_t>(field, "space figure");
    if (name == "records") s.record_count = v;
    else if (name == "personal") s.personal_data_bytes = v;
    else if (name == "keys") s.key_bytes = v;
    else if (name == "metadata") s.metadata_bytes = v;
    else if (name == "index") s.index_bytes = v;
    else if (name == "total") s.total_db_bytes = v;
    else malformed("unknown space field '" + std::string(name) + "'");
  }
  s.space_factor = space_factor(s.personal_data_bytes, s.total_db_bytes);
  return s;
}

bool LineChannel::read_line(std::string* line) {
  while (true) {
    std::size_t nl = buffer_.find('\n', pos_);
    if (nl != std::string::npos) {
      line->assign(buffer_, pos_, nl - pos_);
      if (!line->empty() && line->back() == '\r') line->pop_back();
      pos_ = nl + 1;
      if (pos_ > 65536 && pos_ * 2 > buffer_.size()) {
        buffer_.erase(0, pos_);
        pos_ = 0;
      }
      return true;
    }
    char chunk[65536];
    ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void LineChannel::write_all(std::string_view bytes) {
  while (!bytes.empty()) {
    ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw Error(ErrorCode::kDriverUnreachable, "connection lost");
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace pds
