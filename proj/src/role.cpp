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

#include "pds/role.hpp"

#include "pds/record.hpp"

namespace pds {

std::string_view role_kind_name(RoleKind kind) {
  switch (kind) {
    case RoleKind::kController: return "CONTROLLER";
    case RoleKind::kCustomer: return "CUSTOMER";
    case RoleKind::kProcessor: return "PROCESSOR";
    case RoleKind::kRegulator: return "REGULATOR";
  }
  return "";
}

std::string Role::to_string() const {
  std::string out(role_kind_name(kind));
  if (!actor.empty()) {
    out.push_back(':');
    out.append(actor);
  }
  return out;
}

std::optional<Role> parse_role(std::string_view text) {
  std::size_t colon = text.find(':');
  std::string_view name = text.substr(0, colon);
  std::string_view actor =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  for (RoleKind kind : {RoleKind::kController, RoleKind::kCustomer,
                        RoleKind::kProcessor, RoleKind::kRegulator}) {
    if (role_kind_name(kind) != name) continue;
    if (colon != std::string_view::npos && !is_valid_token(actor)) return std::nullopt;
    if (actor.find(' ') != std::string_view::npos) return std::nullopt;
    if (kind != RoleKind::kController && actor.empty()) return std::nullopt;
    return Role{kind, std::string(actor)};
  }
  return std::nullopt;
}

}  // namespace pds
