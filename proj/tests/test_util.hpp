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

#include <filesystem>
#include <random>
#include <string>

#include "pds/record.hpp"
#include "pds/store.hpp"

namespace pds::testing {

inline constexpr const char* kExampleLine =
    "ph-1x4b;123-456-7890;PUR=ads,2fa;TTL=7776000;USR=neo;OBJ=;DEC=;SHR=;SRC=first-party;";

inline PersonalRecord make_record(std::string key, std::string usr, TokenSet pur = {"ads"},
                                  int64_t ttl = 3600, std::string data = "payload") {
  PersonalRecord r;
  r.key = std::move(key);
  r.data = std::move(data);
  r.meta.usr = std::move(usr);
  r.meta.pur = std::move(pur);
  r.meta.ttl = ttl;
  r.meta.src = {"first-party"};
  return r;
}

inline StoreConfig logical_config() {
  StoreConfig config;
  config.clock_mode = ClockMode::kLogical;
  config.background_reaper = false;
  return config;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pds-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Random printable token without separators.
inline std::string random_token(std::mt19937_64& rng, std::size_t max_len = 12) {
  static constexpr std::string_view kAlphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_.:@+!#$%&*/?";
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string out(len(rng), ' ');
  for (char& c : out) c = kAlphabet[pick(rng)];
  return out;
}

}  // namespace pds::testing
