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

// Line protocol shared by the server and the remote driver.
//
//   client: HELLO <role>[:<actor>]
//   server: OK 0
//   client: REQ <role>[:<actor>] <QUERY-NAME> <args>
//   server: OK <n>            followed by n body lines
//       or: ERR <CODE> <message>
//
// Arguments by query:
//   CREATE-RECORD                <canonical record line>
//   *-BY-KEY/PUR/USR/OBJ/SHR     <token>
//   *-BY-TTL, *-BY-DEC           (none)
//   UPDATE-DATA-BY-KEY           <key>;<data>
//   UPDATE-METADATA-BY-<DIM>     <token>;<ATTR>;<add|remove|set>;<v1,v2,...>
//   GET-SYSTEM-LOGS              <start_ms>;<end_ms>
//   GET-SYSTEM-FEATURES          (none)
//   VERIFY-DELETION              <key>
//
// Body lines by payload: canonical record lines, metadata lines
// (`key;PUR=...;`), a single decimal count, audit lines,
// `erased=<0|1>;seq=<n|->;latency_ms=<n|->;`, or `<CAPABILITY>=<LEVEL>`.
//
// Administrative lines (no role): `TICK <delta_ms>` advances a logical
// clock and answers the new reading, `REAP` runs one reaper pass and answers
// the erased count, `STATS` answers one space-accounting line, `CLOCK`
// answers `logical` or `wall`, `QUIT` ends the session.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pds/query.hpp"
#include "pds/role.hpp"
#include "pds/store.hpp"

namespace pds {

std::string format_request(const Role& role, const GdprQuery& query);

struct WireRequest {
  Role role;
  GdprQuery query;
};

// Throws Error(kMalformed) when the line cannot be understood. A well-spelled
// query name with an invalid (family, dimension) pair parses successfully so
// the service can reject and audit it.
WireRequest parse_request(std::string_view line);

// Status line plus body lines, without trailing newlines.
std::vector<std::string> format_response(const QueryResponse& response);

// Rebuilds a response from the status line and body produced for `query`.
// Throws Error(kMalformed) on a body that does not fit the query.
QueryResponse parse_response(const Role& requester, const GdprQuery& query,
                             std::string_view status, const std::vector<std::string>& body);

// Body line count announced by a status line; nullopt for `ERR` lines.
// Throws Error(kMalformed) for anything else.
std::optional<std::size_t> response_body_size(std::string_view status);

std::string format_deletion_status(const DeletionStatus& status);
DeletionStatus parse_deletion_status(std::string_view line);

std::string format_space_stats(const SpaceStats& stats);
SpaceStats parse_space_stats(std::string_view line);

// Buffered line I/O over a connected socket.
class LineChannel {
 public:
  explicit LineChannel(int fd) : fd_(fd) {}

  // False on EOF or error. Strips the trailing "\n" and an optional "\r".
  bool read_line(std::string* line);
  // Throws Error(kDriverUnreachable) on failure.
  void write_all(std::string_view bytes);

  int fd() const { return fd_; }

 private:
  int fd_;
  std::string buffer_;
  std::size_t pos_ = 0;
};

}  // namespace pds
