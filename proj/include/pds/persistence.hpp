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

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pds {

enum class AtRestTransform { kIdentity, kEncrypted };

// Environment variables read by the CLI and the C API.
inline constexpr const char* kDataDirEnv = "PDS_DATA_DIR";
inline constexpr const char* kAtRestKeyEnv = "PDS_AT_REST_KEY";

// Byte transform applied to every persisted log entry.
class ByteTransform {
 public:
  virtual ~ByteTransform() = default;
  virtual std::string seal(std::string_view plain) const = 0;
  // Throws Error(kStorageFailure) if the entry fails authentication.
  virtual std::string open(std::string_view sealed) const = 0;
};

std::unique_ptr<ByteTransform> make_identity_transform();
// XSalsa20-Poly1305 with a key derived from `secret`; fresh nonce per entry.
std::unique_ptr<ByteTransform> make_encrypting_transform(std::string_view secret);

// Append-only file of length-prefixed entries: a 4-byte little-endian length
// followed by the sealed payload. A torn tail entry is ignored on replay.
class AppendLog {
 public:
  AppendLog(std::filesystem::path path, std::unique_ptr<ByteTransform> transform);
  ~AppendLog();

  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  // Written and flushed before returning. Throws Error(kStorageFailure).
  void append(std::string_view payload);

  // Decoded payloads in file order.
  std::vector<std::string> replay() const;

  // Atomically replaces the file with `payloads` (write to temp, rename).
  void rewrite(const std::vector<std::string>& payloads);

  std::size_t entry_count() const { return entries_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void open_for_append();
  std::vector<std::string> decode(std::size_t* valid_bytes) const;

  std::filesystem::path path_;
  std::unique_ptr<ByteTransform> transform_;
  std::FILE* file_ = nullptr;
  std::size_t entries_ = 0;
};

}  // namespace pds
