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

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pds/properties.hpp"
#include "pds/query.hpp"
#include "pds/role.hpp"

namespace pds {

// Seeded generator with portable derived draws: the standard library
// distributions differ between implementations, these do not.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }
  // 53 random mantissa bits in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform in [0, n); n must be positive.
  uint64_t uniform_index(uint64_t n);
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed (splitmix64 finalizer).
uint64_t mix_seed(uint64_t seed, uint64_t stream);

enum class DistributionKind { kUniform, kZipf };

std::string_view distribution_name(DistributionKind kind);
std::optional<DistributionKind> parse_distribution(std::string_view name);

struct DistributionSpec {
  DistributionKind kind = DistributionKind::kZipf;
  double theta = 0.99;
  uint64_t population = 1;

  static DistributionSpec uniform(uint64_t n) { return {DistributionKind::kUniform, 0.0, n}; }
  static DistributionSpec zipf(uint64_t n, double theta) { return {DistributionKind::kZipf, theta, n}; }
};

// Draws ranks in 1..N. Zipf uses an exact inverse-CDF table, so the
// empirical frequencies converge to P(i) = i^-theta / H(N, theta).
class RankSampler {
 public:
  // Throws Error(kInvalidArgument) for N == 0 or a non-positive theta.
  explicit RankSampler(DistributionSpec spec);

  uint64_t sample(Rng& rng) const;
  double pmf(uint64_t rank) const;
  uint64_t population() const { return spec_.population; }
  const DistributionSpec& spec() const { return spec_; }

 private:
  DistributionSpec spec_;
  std::vector<double> cdf_;
};

// Entities (users, purposes, sharing partners) are spread over a fixed set
// of lanes; workers own whole lanes so their key sets never overlap.
inline constexpr uint64_t kLanes = 64;

struct Partition {
  uint32_t worker = 0;
  uint32_t workers = 1;

  bool owns_lane(uint64_t lane) const { return lane % workers == worker; }
  bool owns_entity(uint64_t index) const { return owns_lane(index % kLanes); }
};

inline constexpr uint64_t kPartnerCount = 2 * kLanes;

struct LoadSpec {
  uint64_t record_count = 100000;
  uint64_t user_count = 0;     // 0: record_count / 10
  uint64_t purpose_count = 0;  // 0: record_count / 20, at least one per lane
  std::size_t key_length = 8;
  std::size_t data_length = 10;
  int64_t ttl_short_s = 300;
  int64_t ttl_long_s = 432000;
  double ttl_short_share = 0.2;
  uint64_t seed = 1;

  static LoadSpec from_properties(const Properties& props);

  uint64_t users() const;
  uint64_t purposes() const;
  // Throws Error(kInvalidArgument).
  void validate() const;

  // Short-lived iff the running count floor(i * share) steps at i, which
  // yields exactly floor(record_count * share) short records.
  bool short_ttl(uint64_t index) const;
  std::string key(uint64_t index) const;
  // Purpose index for a record of `user`, chosen within the user's lane.
  uint64_t purpose_for(uint64_t user, Rng& rng) const;
  // Loaded records use index < record_count; run-time creates continue above.
  PersonalRecord record(uint64_t index) const;
  // A fresh record for `user` with its own random stream.
  PersonalRecord make_record(uint64_t index, uint64_t user, Rng& rng) const;
};

std::string user_token(uint64_t user);
std::string purpose_token(uint64_t purpose);
std::string partner_token(uint64_t partner);

// CREATE-RECORD queries for every loaded record, in index order.
std::vector<GdprQuery> generate_load(const LoadSpec& spec);
GdprQuery load_query(const LoadSpec& spec, uint64_t index);

enum class WorkloadName { kController, kCustomer, kProcessor, kRegulator };

inline constexpr WorkloadName kAllWorkloads[] = {WorkloadName::kController,
                                                 WorkloadName::kCustomer,
                                                 WorkloadName::kProcessor,
                                                 WorkloadName::kRegulator};

std::string_view workload_name(WorkloadName name);
std::optional<WorkloadName> parse_workload_name(std::string_view text);

enum class Template {
  kCreateRecord,
  kDeleteRecordByMeta,    // by PUR, TTL or USR
  kUpdateMetadataByMeta,  // by PUR, USR or SHR
  kReadDataByUsr,
  kReadMetadataByKey,
  kUpdateDataByKey,
  kUpdateMetadataByKey,
  kDeleteRecordByKey,
  kReadDataByKey,
  kReadDataByMeta,  // by PUR, OBJ or DEC
  kReadMetadataByUsr,
  kGetSystemLogs,
  kVerifyDeletion,
};

inline constexpr std::size_t kTemplateCount = 13;

std::string_view template_name(Template t);
std::optional<Template> parse_template(std::string_view name);
WorkloadName template_workload(Template t);

struct TemplateWeight {
  Template tmpl;
  uint32_t weight;
};

struct WorkloadSpec {
  WorkloadName name = WorkloadName::kCustomer;
  std::vector<TemplateWeight> mix;
  // Applies to the skewed selections; controller selections and the
  // processor's metadata-conditioned reads are always uniform.
  DistributionKind distribution = DistributionKind::kZipf;
  double zipf_theta = 0.99;
  uint64_t operation_count = 10000;
  uint64_t seed = 1;

  static WorkloadSpec standard(WorkloadName name);
  // Reads operationcount, distribution, zipf_theta, seed and
  // weight.<template> overrides on top of the standard mix.
  static WorkloadSpec from_properties(WorkloadName name, const Properties& props);

  // Throws Error(kInvalidArgument) unless weights sum to 100 and every
  // template belongs to this workload.
  void validate() const;
};

struct GeneratedOp {
  Template tmpl = Template::kCreateRecord;
  Role role;
  GdprQuery query;
  // A create emitted ahead of a template that found no live key.
  bool regenerated = false;
};

// Per-worker trace generator. Keeps a model of the partition's live records
// (ownership, purposes, objections, expiry) so that every generated
// operation targets a key that is live at generation time: creates never
// repeat a key, and nothing is read, updated or deleted after its deletion
// or expiry. Generated traces depend only on the specs, the partition and
// the `now_ms` readings passed in.
class WorkloadGenerator {
 public:
  WorkloadGenerator(LoadSpec load, Partition partition, int64_t load_time_ms);

  // Starts a workload. Selection populations are fixed at this point.
  void begin(const WorkloadSpec& spec, int64_t now_ms);

  // nullopt once operation_count template draws have been emitted.
  // Regenerated creates come before their dependent operation and do not
  // count towards operation_count.
  std::optional<GeneratedOp> next(int64_t now_ms);

  uint64_t emitted() const { return emitted_; }
  uint64_t regenerated() const { return regenerated_; }
  const std::array<uint64_t, kTemplateCount>& template_counts() const { return counts_; }
  std::size_t live_count() const { return live_.size(); }
  const Partition& partition() const { return partition_; }
  const LoadSpec& load_spec() const { return load_; }

 private:
  struct Model {
    uint64_t user = 0;
    uint64_t purpose = 0;
    bool objects_purpose = false;
    bool objects_automated = false;
    int64_t expiry_ms = 0;
  };

  void add(uint64_t index, const Model& model);
  void remove(uint64_t index);
  void expire_until(int64_t now_ms);

  GeneratedOp make_create(uint64_t user, bool regenerated);
  GeneratedOp controller_op(Template t);
  std::optional<GeneratedOp> customer_op(Template t, uint64_t user);
  std::optional<GeneratedOp> processor_op(Template t);
  GeneratedOp regulator_op(Template t, int64_t now_ms);

  uint64_t pick_user(bool skewed);
  uint64_t pick_purpose();
  uint64_t pick_partner();
  std::optional<uint64_t> pick_live_key_of(uint64_t user);
  std::string random_data();

  LoadSpec load_;
  Partition partition_;
  int64_t run_start_ms_ = -1;
  int64_t now_ms_ = 0;

  std::vector<uint64_t> users_;
  std::vector<uint64_t> purposes_;
  std::vector<uint64_t> partners_;

  std::unordered_map<uint64_t, Model> records_;
  std::vector<uint64_t> live_;
  std::unordered_map<uint64_t, std::size_t> live_pos_;
  std::unordered_map<uint64_t, std::vector<uint64_t>> by_user_;
  std::unordered_map<uint64_t, std::vector<uint64_t>> by_purpose_;
  std::set<std::pair<int64_t, uint64_t>> expiry_;
  std::vector<uint64_t> created_;
  uint64_t next_index_ = 0;

  WorkloadSpec spec_;
  std::optional<Rng> rng_;
  std::vector<Template> deck_;
  std::optional<RankSampler> user_sampler_;
  std::optional<RankSampler> key_sampler_;
  std::optional<RankSampler> created_sampler_;
  std::vector<uint64_t> user_order_;
  std::vector<uint64_t> key_order_;
  std::vector<uint64_t> created_order_;
  std::optional<GeneratedOp> pending_;

  uint64_t emitted_ = 0;
  uint64_t regenerated_ = 0;
  std::array<uint64_t, kTemplateCount> counts_{};
};

}  // namespace pds
