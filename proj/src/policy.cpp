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

#include "pds/policy.hpp"

namespace pds {

namespace {

Decision allow() { return {Verdict::kAllow, {}, {}}; }
Decision deny(std::string reason) { return {Verdict::kDeny, {}, std::move(reason)}; }

Decision customer_decision(const Role& role, const GdprQuery& q) {
  const std::string& user = role.actor;
  auto filtered = [&]() -> Decision {
    // A USR selector already pins the owner: self-access needs no filter.
    if (q.dimension == Dimension::kUsr) return q.token == user ? allow() : deny("not-owner");
    return {Verdict::kAllowFiltered, user, {}};
  };
  switch (q.family) {
    case Family::kCreateRecord:
    case Family::kVerifyDeletion:
      return deny("role-forbidden");
    case Family::kGetSystem:
      return q.dimension == Dimension::kFeatures ? allow() : deny("role-forbidden");
    case Family::kDeleteRecord:
      if (q.dimension == Dimension::kTtl) return deny("role-forbidden");
      return filtered();
    case Family::kReadData:
    case Family::kReadMetadata:
    case Family::kUpdateData:
      return filtered();
    case Family::kUpdateMetadata:
      if (q.edit.attribute != Attribute::kObj && q.edit.attribute != Attribute::kPur) {
        return deny("attribute-forbidden");
      }
      return filtered();
  }
  return deny("role-forbidden");
}

Decision processor_decision(const GdprQuery& q) {
  switch (q.family) {
    case Family::kReadData:
      return q.dimension == Dimension::kUsr ? deny("role-forbidden") : allow();
    case Family::kUpdateMetadata:
      if (q.edit.attribute == Attribute::kDec && q.edit.op == EditOp::kAdd) return allow();
      return deny("attribute-forbidden");
    case Family::kGetSystem:
      return q.dimension == Dimension::kFeatures ? allow() : deny("role-forbidden");
    default:
      return deny("role-forbidden");
  }
}

Decision regulator_decision(const GdprQuery& q) {
  switch (q.family) {
    case Family::kReadMetadata:
    case Family::kGetSystem:
    case Family::kVerifyDeletion:
      return allow();
    default:
      return deny("role-forbidden");
  }
}

}  // namespace

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kAllow: return "ALLOW";
    case Verdict::kAllowFiltered: return "ALLOW_FILTERED";
    case Verdict::kDeny: return "DENY";
  }
  return "";
}

Decision authorize(const Role& role, const GdprQuery& query) {
  switch (role.kind) {
    case RoleKind::kController: return allow();
    case RoleKind::kCustomer: return customer_decision(role, query);
    case RoleKind::kProcessor: return processor_decision(query);
    case RoleKind::kRegulator: return regulator_decision(query);
  }
  return deny("role-forbidden");
}

}  // namespace pds
