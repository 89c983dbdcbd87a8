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

#include <stdexcept>
#include <string>
#include <string_view>

namespace pds {

// Response classes shared by the store, the query API and the wire protocol.
// The numeric values are mirrored by pds_status in pds.h.
enum class ErrorCode {
  kOk = 0,
  kMalformed = 1,
  kDenied = 2,
  kNotFound = 3,
  kExpired = 4,
  kDuplicateKey = 5,
  kStorageFailure = 6,
  kInvalidSelector = 7,
  kInvalidAttribute = 8,
  kUnknownKey = 9,
  kInvalidRange = 10,
  kDriverUnreachable = 11,
  kValidationAbort = 12,
  kInvalidArgument = 13,
};

std::string_view error_code_name(ErrorCode code);
// Inverse of error_code_name; returns false for unknown names.
bool parse_error_code(std::string_view name, ErrorCode* out);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pds
