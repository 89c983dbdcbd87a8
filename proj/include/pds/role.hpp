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

#include <optional>
#include <string>
#include <string_view>

namespace pds {

enum class RoleKind { kController, kCustomer, kProcessor, kRegulator };

std::string_view role_kind_name(RoleKind kind);

// An acting party. Actors are trusted labels; nothing here authenticates.
struct Role {
  RoleKind kind = RoleKind::kController;
  std::string actor;  // user token for customers; may be empty for controllers

  static Role controller(std::string actor = {}) { return {RoleKind::kController, std::move(actor)}; }
  static Role customer(std::string user) { return {RoleKind::kCustomer, std::move(user)}; }
  static Role processor(std::string actor) { return {RoleKind::kProcessor, std::move(actor)}; }
  static Role regulator(std::string actor) { return {RoleKind::kRegulator, std::move(actor)}; }

  bool operator==(const Role&) const = default;

  // `CONTROLLER`, `CUSTOMER:neo`, ...
  std::string to_string() const;
};

// Inverse of Role::to_string. Customers, processors and regulators need an
// actor token. Returns nullopt when malformed.
std::optional<Role> parse_role(std::string_view text);

}  // namespace pds
