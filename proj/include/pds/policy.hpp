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

#include <string>
#include <string_view>

#include "pds/query.hpp"
#include "pds/role.hpp"

namespace pds {

enum class Verdict { kAllow, kAllowFiltered, kDeny };

std::string_view verdict_name(Verdict verdict);

struct Decision {
  Verdict verdict = Verdict::kDeny;
  // kAllowFiltered: results and writes are confined to records of this user.
  std::string owner;
  // kDeny: "role-forbidden", "not-owner" or "attribute-forbidden".
  std::string reason;

  bool operator==(const Decision&) const = default;
};

// Role matrix:
//   CONTROLLER  every query.
//   CUSTOMER(u) reads, updates and deletes confined to records with usr = u;
//               metadata edits limited to PUR and OBJ; no creates, no TTL
//               purge, no system logs, no deletion verification.
//   PROCESSOR   READ-DATA by KEY/PUR/OBJ/DEC, and UPDATE-METADATA that only
//               adds DEC tokens.
//   REGULATOR   READ-METADATA, GET-SYSTEM-LOGS, VERIFY-DELETION.
//   Everyone may call GET-SYSTEM-FEATURES.
// Pure and thread-safe. Assumes a valid (family, dimension) pair.
Decision authorize(const Role& role, const GdprQuery& query);

}  // namespace pds
