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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace pds {

// Flat `key=value` configuration. Lines starting with '#' or '!' are
// comments; whitespace around keys and values is trimmed. All typed getters
// throw Error(kInvalidArgument) on unparsable values.
class Properties {
 public:
  static Properties parse(std::string_view text);
  static Properties load(const std::filesystem::path& path);

  // `key=value`; throws Error(kInvalidArgument) without '='.
  void apply_override(std::string_view assignment);
  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  void merge(const Properties& other);

  bool has(std::string_view key) const { return values_.count(std::string(key)) > 0; }
  std::optional<std::string> find(std::string_view key) const;

  std::string get(std::string_view key, std::string_view fallback) const;
  int64_t get_int(std::string_view key, int64_t fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace pds
