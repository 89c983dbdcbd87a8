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

#include "pds/error.hpp"

#include <array>
#include <utility>

namespace pds {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 14> kNames = {{
    {ErrorCode::kOk, "OK"},
    {ErrorCode::kMalformed, "MALFORMED"},
    {ErrorCode::kDenied, "DENIED"},
    {ErrorCode::kNotFound, "NOT_FOUND"},
    {ErrorCode::kExpired, "EXPIRED"},
    {ErrorCode::kDuplicateKey, "DUPLICATE_KEY"},
    {ErrorCode::kStorageFailure, "STORAGE_FAILURE"},
    {ErrorCode::kInvalidSelector, "INVALID_SELECTOR"},
    {ErrorCode::kInvalidAttribute, "INVALID_ATTRIBUTE"},
    {ErrorCode::kUnknownKey, "UNKNOWN_KEY"},
    {ErrorCode::kInvalidRange, "INVALID_RANGE"},
    {ErrorCode::kDriverUnreachable, "DRIVER_UNREACHABLE"},
    {ErrorCode::kValidationAbort, "VALIDATION_ABORT"},
    {ErrorCode::kInvalidArgument, "INVALID_ARGUMENT"},
}};

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "UNKNOWN";
}

bool parse_error_code(std::string_view name, ErrorCode* out) {
  for (const auto& [c, n] : kNames) {
    if (n == name) {
      *out = c;
      return true;
    }
  }
  return false;
}

}  // namespace pds
