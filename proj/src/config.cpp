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


#include <cstdlib>

#include "pds/bench.hpp"
#include "pds/service.hpp"

namespace pds {

namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

std::set<IndexedAttribute> parse_indexes(const std::string& text) {
  if (text == "all") return {std::begin(kAllIndexes), std::end(kAllIndexes)};
  std::set<IndexedAttribute> out;
  if (text == "none" || text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string name = text.substr(start, comma - start);
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    auto attr = parse_indexed_attribute(name);
    if (!attr) invalid("unknown index attribute '" + name + "'");
    out.insert(*attr);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

ServiceConfig ServiceConfig::from_properties(const Properties& props) {
  ServiceConfig config;
  StoreConfig& sc = config.store;
  sc.index_attributes = parse_indexes(props.get("store.index", "all"));
  sc.reap_interval_ms = props.get_int("store.reap_interval_ms", sc.reap_interval_ms);
  if (sc.reap_interval_ms < 0) invalid("store.reap_interval_ms must be >= 0");

  std::string clock = props.get("store.clock", "");
  if (clock.empty()) {
    RunConfig run = RunConfig::from_properties(props);
    clock = run.validation == ValidationMode::kStrict ? "logical" : "wall";
  }
  if (clock == "logical") {
    sc.clock_mode = ClockMode::kLogical;
  } else if (clock == "wall") {
    sc.clock_mode = ClockMode::kWall;
  } else {
    invalid("store.clock must be wall or logical");
  }

  std::string persistence = props.get("store.persistence", "none");
  if (persistence == "log") {
    sc.persistence = Persistence::kAppendLog;
  } else if (persistence != "none") {
    invalid("store.persistence must be none or log");
  }
  if (sc.persistence == Persistence::kAppendLog) {
    std::string dir = props.get("store.data_dir", "");
    if (dir.empty()) {
      const char* env = std::getenv(kDataDirEnv);
      if (env == nullptr || *env == '\0') {
        invalid(std::string("store.persistence=log needs store.data_dir or $") + kDataDirEnv);
      }
      dir = env;
    }
    sc.data_dir = dir;
  }
  if (props.get_bool("store.encryption", false)) {
    if (sc.persistence != Persistence::kAppendLog) invalid("store.encryption needs store.persistence=log");
    const char* key = std::getenv(kAtRestKeyEnv);
    if (key == nullptr || *key == '\0') invalid(std::string("store.encryption needs $") + kAtRestKeyEnv);
    sc.at_rest_transform = AtRestTransform::kEncrypted;
    sc.at_rest_key = key;
  }
  config.auditing = props.get_bool("store.auditing", true);
  return config;
}

}  // namespace pds
