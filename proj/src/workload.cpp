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

#include "pds/workload.hpp"

#include <algorithm>
#include <cmath>

#include "pds/error.hpp"

namespace pds {

namespace {

constexpr std::string_view kDataAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::string_view kSources[] = {"webfrm", "mobapp", "crmimp", "survey"};

std::string padded(char prefix, uint64_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  std::string out(1, prefix);
  if (digits.size() < width) out.append(width - digits.size(), '0');
  out.append(digits);
  return out;
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.uniform_index(i)]);
  }
}

void erase_value(std::vector<uint64_t>& items, uint64_t value) {
  auto it = std::find(items.begin(), items.end(), value);
  if (it != items.end()) {
    *it = items.back();
    items.pop_back();
  }
}

}  // namespace

uint64_t Rng::uniform_index(uint64_t n) {
  auto i = static_cast<uint64_t>(uniform01() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string_view distribution_name(DistributionKind kind) {
  return kind == DistributionKind::kUniform ? "uniform" : "zipfian";
}

std::optional<DistributionKind> parse_distribution(std::string_view name) {
  if (name == "uniform") return DistributionKind::kUniform;
  if (name == "zipfian" || name == "zipf") return DistributionKind::kZipf;
  return std::nullopt;
}

RankSampler::RankSampler(DistributionSpec spec) : spec_(spec) {
  if (spec_.population == 0) invalid("distribution population must be positive");
  if (spec_.kind == DistributionKind::kUniform) return;
  if (!(spec_.theta > 0.0)) invalid("zipf theta must be positive");
  cdf_.resize(spec_.population);
  double sum = 0.0;
  for (uint64_t i = 0; i < spec_.population; ++i) {
    sum += std::pow(static_cast<double>(i + 1), -spec_.theta);
    cdf_[i] = sum;
  }
  for (double& c : cdf_) c /= sum;
  cdf_.back() = 1.0;
}

uint64_t RankSampler::sample(Rng& rng) const {
  if (spec_.kind == DistributionKind::kUniform) return rng.uniform_index(spec_.population) + 1;
  double u = rng.uniform01();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  auto rank = static_cast<uint64_t>(it - cdf_.begin()) + 1;
  return std::min(rank, spec_.population);
}

double RankSampler::pmf(uint64_t rank) const {
  if (rank == 0 || rank > spec_.population) return 0.0;
  if (spec_.kind == DistributionKind::kUniform) return 1.0 / static_cast<double>(spec_.population);
  return rank == 1 ? cdf_[0] : cdf_[rank - 1] - cdf_[rank - 2];
}

LoadSpec LoadSpec::from_properties(const Properties& props) {
  LoadSpec spec;
  auto non_negative = [&](std::string_view key, int64_t fallback) {
    int64_t v = props.get_int(key, fallback);
    if (v < 0) invalid("property " + std::string(key) + " must not be negative");
    return v;
  };
  spec.record_count = static_cast<uint64_t>(non_negative("recordcount", 100000));
  spec.user_count = static_cast<uint64_t>(non_negative("usercount", 0));
  spec.purpose_count = static_cast<uint64_t>(non_negative("purposecount", 0));
  spec.key_length = static_cast<std::size_t>(non_negative("keylength", 8));
  spec.data_length = static_cast<std::size_t>(non_negative("fieldlength", 10));
  spec.ttl_short_s = non_negative("ttl_short_s", 300);
  spec.ttl_long_s = non_negative("ttl_long_s", 432000);
  spec.ttl_short_share = props.get_double("ttl_short_share", 0.2);
  spec.seed = static_cast<uint64_t>(props.get_int("seed", 1));
  spec.validate();
  return spec;
}

uint64_t LoadSpec::users() const {
  if (user_count > 0) return user_count;
  return std::max<uint64_t>(1, record_count / 10);
}

uint64_t LoadSpec::purposes() const {
  if (purpose_count > 0) return purpose_count;
  return std::max<uint64_t>(kLanes, record_count / 20);
}

void LoadSpec::validate() const {
  if (record_count == 0) invalid("recordcount must be positive");
  if (purposes() < kLanes) invalid("purposecount must be at least " + std::to_string(kLanes));
  if (key_length < 2 || key_length > 19) invalid("keylength must be within 2..19");
  if (data_length == 0) invalid("fieldlength must be positive");
  if (!(ttl_short_share >= 0.0 && ttl_short_share <= 1.0)) {
    invalid("ttl_short_share must be within [0, 1]");
  }
  if (ttl_short_s > kMaxTtlSeconds || ttl_long_s > kMaxTtlSeconds) invalid("TTL too large");
  double capacity = std::pow(10.0, static_cast<double>(key_length - 1));
  if (static_cast<double>(record_count) >= capacity) {
    invalid("keylength too short for recordcount");
  }
}

bool LoadSpec::short_ttl(uint64_t index) const {
  auto steps = [&](uint64_t n) {
    return static_cast<uint64_t>(
        std::floor(static_cast<long double>(n) * ttl_short_share + 1e-9L));
  };
  return steps(index + 1) > steps(index);
}

std::string LoadSpec::key(uint64_t index) const {
  std::string k = padded('k', index, key_length - 1);
  if (k.size() > key_length) invalid("key space exhausted at index " + std::to_string(index));
  return k;
}

uint64_t LoadSpec::purpose_for(uint64_t user, Rng& rng) const {
  uint64_t lane = user % kLanes;
  uint64_t in_lane = (purposes() - lane + kLanes - 1) / kLanes;
  return lane + kLanes * rng.uniform_index(in_lane);
}

namespace {

PersonalRecord build_record(const LoadSpec& spec, uint64_t index, uint64_t user, bool short_ttl,
                            Rng& rng) {
  PersonalRecord r;
  r.key = spec.key(index);
  r.data.reserve(spec.data_length);
  for (std::size_t i = 0; i < spec.data_length; ++i) {
    r.data.push_back(kDataAlphabet[rng.uniform_index(kDataAlphabet.size())]);
  }
  r.meta.usr = user_token(user);
  r.meta.pur.insert(purpose_token(spec.purpose_for(user, rng)));
  r.meta.ttl = short_ttl ? spec.ttl_short_s : spec.ttl_long_s;
  r.meta.src.insert(std::string(kSources[rng.uniform_index(std::size(kSources))]));
  return r;
}

}  // namespace

PersonalRecord LoadSpec::record(uint64_t index) const {
  Rng rng(mix_seed(seed, index));
  return build_record(*this, index, index % users(), short_ttl(index), rng);
}

PersonalRecord LoadSpec::make_record(uint64_t index, uint64_t user, Rng& rng) const {
  bool is_short = rng.bernoulli(ttl_short_share);
  return build_record(*this, index, user, is_short, rng);
}

std::string user_token(uint64_t user) { return padded('u', user, 5); }
std::string purpose_token(uint64_t purpose) { return padded('p', purpose, 4); }
std::string partner_token(uint64_t partner) { return padded('s', partner, 3); }

GdprQuery load_query(const LoadSpec& spec, uint64_t index) {
  return GdprQuery::create(spec.record(index));
}

std::vector<GdprQuery> generate_load(const LoadSpec& spec) {
  spec.validate();
  std::vector<GdprQuery> out;
  out.reserve(spec.record_count);
  for (uint64_t i = 0; i < spec.record_count; ++i) out.push_back(load_query(spec, i));
  return out;
}

std::string_view workload_name(WorkloadName name) {
  switch (name) {
    case WorkloadName::kController: return "controller";
    case WorkloadName::kCustomer: return "customer";
    case WorkloadName::kProcessor: return "processor";
    case WorkloadName::kRegulator: return "regulator";
  }
  return "";
}

std::optional<WorkloadName> parse_workload_name(std::string_view text) {
  for (WorkloadName n : kAllWorkloads) {
    if (workload_name(n) == text) return n;
  }
  return std::nullopt;
}

std::string_view template_name(Template t) {
  switch (t) {
    case Template::kCreateRecord: return "create-record";
    case Template::kDeleteRecordByMeta: return "delete-record";
    case Template::kUpdateMetadataByMeta: return "update-metadata";
    case Template::kReadDataByUsr: return "read-data-by-usr";
    case Template::kReadMetadataByKey: return "read-metadata-by-key";
    case Template::kUpdateDataByKey: return "update-data-by-key";
    case Template::kUpdateMetadataByKey: return "update-metadata-by-key";
    case Template::kDeleteRecordByKey: return "delete-record-by-key";
    case Template::kReadDataByKey: return "read-data-by-key";
    case Template::kReadDataByMeta: return "read-data-by-meta";
    case Template::kReadMetadataByUsr: return "read-metadata-by-usr";
    case Template::kGetSystemLogs: return "get-system-logs";
    case Template::kVerifyDeletion: return "verify-deletion";
  }
  return "";
}

std::optional<Template> parse_template(std::string_view name) {
  for (std::size_t i = 0; i < kTemplateCount; ++i) {
    auto t = static_cast<Template>(i);
    if (template_name(t) == name) return t;
  }
  return std::nullopt;
}

WorkloadName template_workload(Template t) {
  switch (t) {
    case Template::kCreateRecord:
    case Template::kDeleteRecordByMeta:
    case Template::kUpdateMetadataByMeta:
      return WorkloadName::kController;
    case Template::kReadDataByUsr:
    case Template::kReadMetadataByKey:
    case Template::kUpdateDataByKey:
    case Template::kUpdateMetadataByKey:
    case Template::kDeleteRecordByKey:
      return WorkloadName::kCustomer;
    case Template::kReadDataByKey:
    case Template::kReadDataByMeta:
      return WorkloadName::kProcessor;
    default:
      return WorkloadName::kRegulator;
  }
}

WorkloadSpec WorkloadSpec::standard(WorkloadName name) {
  WorkloadSpec spec;
  spec.name = name;
  switch (name) {
    case WorkloadName::kController:
      spec.mix = {{Template::kCreateRecord, 25},
                  {Template::kDeleteRecordByMeta, 25},
                  {Template::kUpdateMetadataByMeta, 50}};
      spec.distribution = DistributionKind::kUniform;
      break;
    case WorkloadName::kCustomer:
      spec.mix = {{Template::kReadDataByUsr, 20},
                  {Template::kReadMetadataByKey, 20},
                  {Template::kUpdateDataByKey, 20},
                  {Template::kUpdateMetadataByKey, 20},
                  {Template::kDeleteRecordByKey, 20}};
      break;
    case WorkloadName::kProcessor:
      spec.mix = {{Template::kReadDataByKey, 80}, {Template::kReadDataByMeta, 20}};
      break;
    case WorkloadName::kRegulator:
      spec.mix = {{Template::kReadMetadataByUsr, 46},
                  {Template::kGetSystemLogs, 31},
                  {Template::kVerifyDeletion, 23}};
      break;
  }
  return spec;
}

WorkloadSpec WorkloadSpec::from_properties(WorkloadName name, const Properties& props) {
  WorkloadSpec spec = standard(name);
  int64_t ops = props.get_int("operationcount", 10000);
  if (ops < 0) invalid("operationcount must not be negative");
  spec.operation_count = static_cast<uint64_t>(ops);
  spec.seed = static_cast<uint64_t>(props.get_int("seed", 1));
  spec.zipf_theta = props.get_double("zipf_theta", spec.zipf_theta);
  if (auto d = props.find("distribution"); d && name != WorkloadName::kController) {
    auto kind = parse_distribution(*d);
    if (!kind) invalid("distribution must be uniform or zipfian");
    spec.distribution = *kind;
  }
  for (auto& tw : spec.mix) {
    std::string key = "weight." + std::string(template_name(tw.tmpl));
    int64_t w = props.get_int(key, tw.weight);
    if (w < 0 || w > 100) invalid(key + " must be within 0..100");
    tw.weight = static_cast<uint32_t>(w);
  }
  spec.validate();
  return spec;
}

void WorkloadSpec::validate() const {
  uint32_t total = 0;
  for (const auto& tw : mix) {
    if (template_workload(tw.tmpl) != name) {
      invalid(std::string(template_name(tw.tmpl)) + " is not part of the " +
              std::string(workload_name(name)) + " workload");
    }
    total += tw.weight;
  }
  if (total != 100) invalid("template weights must sum to 100, got " + std::to_string(total));
  if (distribution == DistributionKind::kZipf && !(zipf_theta > 0.0)) {
    invalid("zipf_theta must be positive");
  }
}

WorkloadGenerator::WorkloadGenerator(LoadSpec load, Partition partition, int64_t load_time_ms)
    : load_(std::move(load)), partition_(partition) {
  load_.validate();
  if (partition_.workers == 0 || partition_.workers > kLanes ||
      partition_.worker >= partition_.workers) {
    invalid("worker partition out of range");
  }
  for (uint64_t u = 0; u < load_.users(); ++u) {
    if (partition_.owns_entity(u)) users_.push_back(u);
  }
  if (users_.empty()) invalid("partition owns no users; raise usercount");
  for (uint64_t p = 0; p < load_.purposes(); ++p) {
    if (partition_.owns_entity(p)) purposes_.push_back(p);
  }
  for (uint64_t s = 0; s < kPartnerCount; ++s) {
    if (partition_.owns_entity(s)) partners_.push_back(s);
  }
  uint64_t users = load_.users();
  for (uint64_t i = 0; i < load_.record_count; ++i) {
    uint64_t user = i % users;
    if (!partition_.owns_entity(user)) continue;
    PersonalRecord r = load_.record(i);
    Model m;
    m.user = user;
    m.purpose = static_cast<uint64_t>(std::stoull(r.meta.pur.begin()->substr(1)));
    m.expiry_ms = load_time_ms + r.meta.ttl * 1000;
    add(i, m);
  }
  next_index_ = load_.record_count + partition_.worker;
}

void WorkloadGenerator::add(uint64_t index, const Model& model) {
  records_[index] = model;
  live_pos_[index] = live_.size();
  live_.push_back(index);
  by_user_[model.user].push_back(index);
  by_purpose_[model.purpose].push_back(index);
  expiry_.emplace(model.expiry_ms, index);
  created_.push_back(index);
}

void WorkloadGenerator::remove(uint64_t index) {
  auto it = records_.find(index);
  if (it == records_.end()) return;
  const Model& m = it->second;
  erase_value(by_user_[m.user], index);
  erase_value(by_purpose_[m.purpose], index);
  expiry_.erase({m.expiry_ms, index});
  std::size_t pos = live_pos_[index];
  live_[pos] = live_.back();
  live_pos_[live_[pos]] = pos;
  live_.pop_back();
  live_pos_.erase(index);
  records_.erase(it);
}

void WorkloadGenerator::expire_until(int64_t now_ms) {
  while (!expiry_.empty() && expiry_.begin()->first <= now_ms) {
    remove(expiry_.begin()->second);
  }
}

void WorkloadGenerator::begin(const WorkloadSpec& spec, int64_t now_ms) {
  spec.validate();
  spec_ = spec;
  rng_.emplace(mix_seed(spec.seed, partition_.worker * 8 + static_cast<uint64_t>(spec.name)));
  deck_.clear();
  pending_.reset();
  emitted_ = 0;
  regenerated_ = 0;
  counts_.fill(0);
  now_ms_ = now_ms;
  if (run_start_ms_ < 0) run_start_ms_ = now_ms;
  expire_until(now_ms);

  user_sampler_.reset();
  key_sampler_.reset();
  created_sampler_.reset();
  auto dist = [&](uint64_t n) {
    return spec_.distribution == DistributionKind::kZipf
               ? DistributionSpec::zipf(n, spec_.zipf_theta)
               : DistributionSpec::uniform(n);
  };
  switch (spec_.name) {
    case WorkloadName::kCustomer:
    case WorkloadName::kRegulator:
      user_order_ = users_;
      shuffle(user_order_, *rng_);
      user_sampler_.emplace(dist(user_order_.size()));
      if (spec_.name == WorkloadName::kRegulator && !created_.empty()) {
        created_order_ = created_;
        shuffle(created_order_, *rng_);
        created_sampler_.emplace(dist(created_order_.size()));
      }
      break;
    case WorkloadName::kProcessor:
      key_order_ = live_;
      shuffle(key_order_, *rng_);
      if (!key_order_.empty()) key_sampler_.emplace(dist(key_order_.size()));
      break;
    case WorkloadName::kController:
      break;
  }
}

std::optional<GeneratedOp> WorkloadGenerator::next(int64_t now_ms) {
  if (!rng_) throw Error(ErrorCode::kInvalidArgument, "begin() must precede next()");
  if (pending_) {
    GeneratedOp op = std::move(*pending_);
    pending_.reset();
    return op;
  }
  if (emitted_ >= spec_.operation_count) return std::nullopt;
  now_ms_ = now_ms;
  expire_until(now_ms);
  if (deck_.empty()) {
    for (const auto& tw : spec_.mix) deck_.insert(deck_.end(), tw.weight, tw.tmpl);
    shuffle(deck_, *rng_);
  }
  Template t = deck_.back();
  deck_.pop_back();
  ++emitted_;
  ++counts_[static_cast<std::size_t>(t)];

  std::optional<GeneratedOp> op;
  switch (template_workload(t)) {
    case WorkloadName::kController:
      return controller_op(t);
    case WorkloadName::kCustomer: {
      uint64_t user = pick_user(true);
      op = customer_op(t, user);
      if (!op) {
        pending_ = make_create(user, true);
        op = customer_op(t, user);
      }
      break;
    }
    case WorkloadName::kProcessor:
      op = processor_op(t);
      if (!op) {
        pending_ = make_create(pick_user(false), true);
        op = processor_op(t);
      }
      break;
    case WorkloadName::kRegulator:
      return regulator_op(t, now_ms);
  }
  if (pending_) {
    // Emit the create first, then the dependent operation.
    ++regenerated_;
    GeneratedOp create = std::move(*pending_);
    pending_ = std::move(op);
    return create;
  }
  return op;
}

GeneratedOp WorkloadGenerator::make_create(uint64_t user, bool regenerated) {
  uint64_t index = next_index_;
  next_index_ += partition_.workers;
  PersonalRecord record = load_.make_record(index, user, *rng_);
  Model m;
  m.user = user;
  m.purpose = static_cast<uint64_t>(std::stoull(record.meta.pur.begin()->substr(1)));
  m.expiry_ms = now_ms_ + record.meta.ttl * 1000;
  add(index, m);
  GeneratedOp op;
  op.tmpl = Template::kCreateRecord;
  op.role = Role::controller("ctl");
  op.query = GdprQuery::create(std::move(record));
  op.regenerated = regenerated;
  return op;
}

GeneratedOp WorkloadGenerator::controller_op(Template t) {
  if (t == Template::kCreateRecord) return make_create(pick_user(false), false);
  GeneratedOp op;
  op.tmpl = t;
  op.role = Role::controller("ctl");
  uint64_t sub = rng_->uniform_index(3);
  if (t == Template::kDeleteRecordByMeta) {
    if (sub == 0) {
      uint64_t p = pick_purpose();
      op.query = GdprQuery::select(Family::kDeleteRecord, Dimension::kPur, purpose_token(p));
      std::vector<uint64_t> keys = by_purpose_[p];
      for (uint64_t k : keys) {
        if (!records_[k].objects_purpose) remove(k);
      }
    } else if (sub == 1) {
      op.query = GdprQuery::select(Family::kDeleteRecord, Dimension::kTtl);
    } else {
      uint64_t u = pick_user(false);
      op.query = GdprQuery::select(Family::kDeleteRecord, Dimension::kUsr, user_token(u));
      std::vector<uint64_t> keys = by_user_[u];
      for (uint64_t k : keys) remove(k);
    }
    return op;
  }
  MetadataEdit edit;
  edit.attribute = Attribute::kShr;
  edit.op = rng_->bernoulli(0.5) ? EditOp::kAdd : EditOp::kRemove;
  edit.values.insert(partner_token(pick_partner()));
  if (sub == 0) {
    op.query = GdprQuery::update_metadata(Dimension::kPur, purpose_token(pick_purpose()), edit);
  } else if (sub == 1) {
    op.query = GdprQuery::update_metadata(Dimension::kUsr, user_token(pick_user(false)), edit);
  } else {
    op.query = GdprQuery::update_metadata(Dimension::kShr, partner_token(pick_partner()), edit);
  }
  return op;
}

std::optional<GeneratedOp> WorkloadGenerator::customer_op(Template t, uint64_t user) {
  GeneratedOp op;
  op.tmpl = t;
  op.role = Role::customer(user_token(user));
  if (t == Template::kReadDataByUsr) {
    op.query = GdprQuery::select(Family::kReadData, Dimension::kUsr, user_token(user));
    return op;
  }
  std::optional<uint64_t> index = pick_live_key_of(user);
  if (!index) return std::nullopt;
  std::string key = load_.key(*index);
  switch (t) {
    case Template::kReadMetadataByKey:
      op.query = GdprQuery::select(Family::kReadMetadata, Dimension::kKey, key);
      break;
    case Template::kUpdateDataByKey:
      op.query = GdprQuery::update_data(key, random_data());
      break;
    case Template::kUpdateMetadataByKey: {
      Model& m = records_[*index];
      bool automated = rng_->bernoulli(0.5);
      bool& flag = automated ? m.objects_automated : m.objects_purpose;
      MetadataEdit edit;
      edit.attribute = Attribute::kObj;
      edit.op = flag ? EditOp::kRemove : EditOp::kAdd;
      edit.values.insert(automated ? std::string(kAutomatedObjection) : purpose_token(m.purpose));
      flag = !flag;
      op.query = GdprQuery::update_metadata(Dimension::kKey, key, std::move(edit));
      break;
    }
    case Template::kDeleteRecordByKey:
      op.query = GdprQuery::select(Family::kDeleteRecord, Dimension::kKey, key);
      remove(*index);
      break;
    default:
      break;
  }
  return op;
}

std::optional<GeneratedOp> WorkloadGenerator::processor_op(Template t) {
  GeneratedOp op;
  op.tmpl = t;
  op.role = Role::processor("analytics");
  if (t == Template::kReadDataByMeta) {
    uint64_t sub = rng_->uniform_index(3);
    if (sub == 0) {
      op.query = GdprQuery::select(Family::kReadData, Dimension::kPur, purpose_token(pick_purpose()));
    } else if (sub == 1) {
      op.query = GdprQuery::select(Family::kReadData, Dimension::kObj, purpose_token(pick_purpose()));
    } else {
      op.query = GdprQuery::select(Family::kReadData, Dimension::kDec);
    }
    return op;
  }
  std::optional<uint64_t> index;
  if (key_sampler_) {
    uint64_t candidate = key_order_[key_sampler_->sample(*rng_) - 1];
    if (records_.count(candidate) > 0) index = candidate;
  }
  if (!index && !live_.empty()) index = live_[rng_->uniform_index(live_.size())];
  if (!index) return std::nullopt;
  op.query = GdprQuery::select(Family::kReadData, Dimension::kKey, load_.key(*index));
  return op;
}

GeneratedOp WorkloadGenerator::regulator_op(Template t, int64_t now_ms) {
  GeneratedOp op;
  op.tmpl = t;
  op.role = Role::regulator("dpa");
  switch (t) {
    case Template::kReadMetadataByUsr:
      op.query = GdprQuery::select(Family::kReadMetadata, Dimension::kUsr,
                                   user_token(pick_user(true)));
      break;
    case Template::kGetSystemLogs: {
      auto elapsed = static_cast<uint64_t>(std::max<int64_t>(0, now_ms - run_start_ms_));
      uint64_t length = rng_->uniform_index(elapsed / 5 + 1);
      uint64_t start = rng_->uniform_index(elapsed - length + 1);
      int64_t lo = run_start_ms_ + static_cast<int64_t>(start);
      op.query = GdprQuery::system_logs({lo, lo + static_cast<int64_t>(length)});
      break;
    }
    default: {
      uint64_t index = created_sampler_ ? created_order_[created_sampler_->sample(*rng_) - 1]
                                        : created_[rng_->uniform_index(created_.size())];
      op.query = GdprQuery::verify_deletion(load_.key(index));
      break;
    }
  }
  return op;
}

uint64_t WorkloadGenerator::pick_user(bool skewed) {
  if (skewed && user_sampler_) return user_order_[user_sampler_->sample(*rng_) - 1];
  return users_[rng_->uniform_index(users_.size())];
}

uint64_t WorkloadGenerator::pick_purpose() {
  return purposes_[rng_->uniform_index(purposes_.size())];
}

uint64_t WorkloadGenerator::pick_partner() {
  return partners_[rng_->uniform_index(partners_.size())];
}

std::optional<uint64_t> WorkloadGenerator::pick_live_key_of(uint64_t user) {
  auto it = by_user_.find(user);
  if (it == by_user_.end() || it->second.empty()) return std::nullopt;
  return it->second[rng_->uniform_index(it->second.size())];
}

std::string WorkloadGenerator::random_data() {
  std::string data;
  data.reserve(load_.data_length);
  for (std::size_t i = 0; i < load_.data_length; ++i) {
    data.push_back(kDataAlphabet[rng_->uniform_index(kDataAlphabet.size())]);
  }
  return data;
}

}  // namespace pds
