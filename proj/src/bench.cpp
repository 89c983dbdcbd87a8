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

#include "pds/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "pds/error.hpp"
#include "pds/oracle.hpp"
#include "pds/wire.hpp"

namespace pds {

namespace {

using Steady = std::chrono::steady_clock;

constexpr std::size_t kMaxMismatchNotes = 10;

int64_t floor_div(int64_t a, int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

bool crosses(int64_t prev_ms, int64_t now_ms, int64_t interval_ms) {
  return interval_ms > 0 && floor_div(now_ms, interval_ms) > floor_div(prev_ms, interval_ms);
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                     : comma - start);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Shared {
  const RunConfig* config = nullptr;
  bool logical = false;
  int64_t wall_base_ms = 0;
  Steady::time_point wall_anchor;
  int64_t slack_ms = 0;

  std::atomic<bool> stop{false};
  std::atomic<uint64_t> validated{0};
  std::atomic<uint64_t> matched{0};
  std::mutex mu;
  std::vector<std::string> mismatches;
  std::string abort_reason;

  int64_t wall_now() const {
    return wall_base_ms +
           std::chrono::duration_cast<std::chrono::milliseconds>(Steady::now() - wall_anchor)
               .count();
  }

  void note_mismatch(WorkloadName w, const GeneratedOp& op, const std::string& why) {
    std::lock_guard lock(mu);
    if (mismatches.size() < kMaxMismatchNotes) {
      mismatches.push_back(std::string(workload_name(w)) + ": " +
                           format_request(op.role, op.query) + " -> " + why);
    }
  }

  void count(bool ok) {
    uint64_t v = validated.fetch_add(1) + 1;
    uint64_t m = matched.fetch_add(ok ? 1 : 0) + (ok ? 1 : 0);
    if (v >= config->abort_min_ops &&
        static_cast<double>(m) * 100.0 < config->abort_below_pct * static_cast<double>(v)) {
      std::lock_guard lock(mu);
      if (!stop.exchange(true)) {
        abort_reason = "correctness fell to " + std::to_string(correctness_pct(m, v)) +
                       "% after " + std::to_string(v) + " validated responses";
      }
    }
  }
};

struct WorkerOutput {
  std::vector<OpSample> samples;
  int64_t busy_ns = 0;
  std::optional<Steady::time_point> first_start;
  Steady::time_point last_end;
  uint64_t regenerated = 0;
  std::array<uint64_t, kTemplateCount> counts{};
};

class Worker {
 public:
  Worker(uint32_t id, std::shared_ptr<BackendDriver> driver, WorkloadGenerator generator,
         Oracle* oracle, Shared* shared, int64_t start_ms)
      : id_(id),
        driver_(std::move(driver)),
        gen_(std::move(generator)),
        oracle_(oracle),
        shared_(shared),
        last_ms_(start_ms) {}

  void run(const WorkloadSpec& spec, WorkerOutput* out) {
    const RunConfig& cfg = *shared_->config;
    int64_t now = tick();
    gen_.begin(spec, now);
    uint64_t seq = 0;
    bool partitioned = cfg.validation == ValidationMode::kPartitioned;
    while (!shared_->stop.load(std::memory_order_relaxed)) {
      std::optional<GeneratedOp> op = gen_.next(now);
      if (!op) break;
      // Other workers move the backend clock concurrently; bracket the call.
      int64_t before = partitioned ? reading() : now;
      auto t0 = Steady::now();
      QueryResponse response = driver_->execute(op->role, op->query);
      auto t1 = Steady::now();
      int64_t after = partitioned ? reading() : now;
      if (!out->first_start) out->first_start = t0;
      out->last_end = t1;
      int64_t span = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
      out->busy_ns += span;

      OpSample sample;
      sample.worker = id_;
      sample.seq = seq++;
      sample.tmpl = op->tmpl;
      sample.regenerated = op->regenerated;
      sample.latency_ns = span;
      sample.code = response.code();
      if (oracle_) {
        std::string why;
        Expectation expected = oracle_->apply(op->role, op->query, before, after - before);
        bool ok = oracle_->check(expected, response, &why);
        if (!ok && partitioned) ok = tolerated(*op, expected, response, before, after, &why);
        sample.validated = true;
        sample.matched = ok;
        if (!ok) shared_->note_mismatch(spec.name, *op, why);
        shared_->count(ok);
      }
      out->samples.push_back(sample);
      now = tick();
    }
    out->regenerated = gen_.regenerated();
    out->counts = gen_.template_counts();
  }

 private:
  int64_t reading() { return shared_->logical ? driver_->now_ms() : shared_->wall_now(); }

  // Next clock reading; on a logical backend this advances the clock and
  // runs the reaper at interval boundaries.
  int64_t tick() {
    const RunConfig& cfg = *shared_->config;
    if (!shared_->logical) return last_ms_ = shared_->wall_now();
    int64_t prev = last_ms_;
    int64_t now = driver_->advance_clock(cfg.clock_step_ms);
    if (crosses(prev, now, cfg.reap_interval_ms)) {
      driver_->reap();
      if (oracle_) oracle_->reap(now);
    }
    return last_ms_ = now;
  }

  // Partition-mode acceptance for responses that are not exactly
  // predictable. Key and user scoped queries stay exact except for rows
  // whose expiry falls inside the call's clock window; every other selector
  // reaches rows whose state races with the clock and is checked by
  // predicate only.
  bool tolerated(const GeneratedOp& op, const Expectation& expected,
                 const QueryResponse& response, int64_t before, int64_t after,
                 std::string* why) {
    const GdprQuery& q = op.query;
    int64_t lo = before - shared_->slack_ms;
    int64_t hi = after + shared_->slack_ms;
    if (q.family == Family::kVerifyDeletion) {
      if (!response.ok() || response.kind() != PayloadKind::kDeletion) return false;
      // Sequence numbers are global and the reaper may run from any worker,
      // so only the erased flag and a sane latency are comparable.
      const auto& got = std::get<DeletionStatus>(response.payload());
      if (got.erased == expected.deletion.erased &&
          (!got.erased || got.latency_ms.value_or(-1) >= 0)) {
        return true;
      }
      const PersonalRecord* row = oracle_->find(q.token);
      return (row && row->expiry_ms() <= hi) || oracle_->ambiguous_erasure(q.token) ||
             oracle_->uncertain(q.token, lo, hi);
    }
    bool scoped = q.dimension == Dimension::kKey || q.dimension == Dimension::kUsr;
    if (!scoped) return predicate_holds(q, response, lo, hi, why);
    // A partition oracle reaps on its own ticks, so an expired row may
    // already be gone, or still present after an ambiguous erasure.
    if (expected.code == ErrorCode::kExpired && response.code() == ErrorCode::kNotFound) {
      return true;
    }
    if (expected.code == ErrorCode::kNotFound && response.code() == ErrorCode::kExpired &&
        oracle_->ambiguous_erasure(q.token)) {
      return true;
    }
    if (!oracle_->expiry_within(q, lo, hi)) return false;
    ErrorCode c = response.code();
    if (c != ErrorCode::kOk && c != ErrorCode::kNotFound && c != ErrorCode::kExpired) {
      return false;
    }
    if (response.kind() == PayloadKind::kRecords) {
      for (const RecordPtr& r : std::get<RecordList>(response.payload()).items()) {
        if (!settled(r->key, hi)) continue;
        if (!oracle_->same_as_row(*r)) return false;
      }
    } else if (response.kind() == PayloadKind::kMetadata) {
      for (const MetadataEntry& m : std::get<std::vector<MetadataEntry>>(response.payload())) {
        if (!settled(m.key, hi)) continue;
        if (oracle_->find(m.key)->meta != m.meta) return false;
      }
    }
    return true;
  }

  // True if the oracle holds `key` with a certain expiry beyond `hi`.
  bool settled(const std::string& key, int64_t hi) const {
    const PersonalRecord* row = oracle_->find(key);
    return row && row->expiry_ms() > hi && !oracle_->uncertain(key, hi, hi);
  }

  bool predicate_holds(const GdprQuery& q, const QueryResponse& response, int64_t lo, int64_t hi,
                       std::string* why) {
    if (!response.ok()) {
      *why = "selector failed with " + std::string(error_code_name(response.code()));
      return false;
    }
    std::unordered_set<std::string> seen;
    if (response.kind() == PayloadKind::kRecords) {
      for (const RecordPtr& r : std::get<RecordList>(response.payload()).items()) {
        if (!Oracle::satisfies(*r, q, nullptr, lo) || !seen.insert(r->key).second) {
          *why = "record " + r->key + " violates the selector";
          return false;
        }
        if (settled(r->key, hi) && !oracle_->same_as_row(*r)) {
          *why = "content differs for " + r->key;
          return false;
        }
      }
    } else if (response.kind() == PayloadKind::kMetadata) {
      for (const MetadataEntry& m : std::get<std::vector<MetadataEntry>>(response.payload())) {
        bool ok = q.dimension != Dimension::kShr || m.meta.shr.count(q.token) > 0;
        if (!ok || !seen.insert(m.key).second) {
          *why = "metadata of " + m.key + " violates the selector";
          return false;
        }
      }
    } else if (response.kind() == PayloadKind::kLogs) {
      uint64_t last = 0;
      for (const AuditEntry& e : std::get<std::vector<AuditEntry>>(response.payload())) {
        if (e.seq <= last || e.timestamp_ms < q.range.start_ms ||
            e.timestamp_ms > q.range.end_ms) {
          *why = "log entry " + std::to_string(e.seq) + " out of order or range";
          return false;
        }
        last = e.seq;
      }
    }
    return true;
  }

  uint32_t id_;
  std::shared_ptr<BackendDriver> driver_;
  WorkloadGenerator gen_;
  Oracle* oracle_;
  Shared* shared_;
  int64_t last_ms_;
};

LatencySummary summarize(std::vector<int64_t> ns) {
  LatencySummary s;
  if (ns.empty()) return s;
  std::sort(ns.begin(), ns.end());
  auto rank = [&](double p) {
    auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(ns.size())));
    return static_cast<double>(ns[std::max<std::size_t>(idx, 1) - 1]) / 1000.0;
  };
  double total = 0;
  for (int64_t v : ns) total += static_cast<double>(v);
  s.mean_us = total / static_cast<double>(ns.size()) / 1000.0;
  s.p50_us = rank(0.50);
  s.p99_us = rank(0.99);
  s.max_us = static_cast<double>(ns.back()) / 1000.0;
  return s;
}

}  // namespace

std::string_view validation_mode_name(ValidationMode mode) {
  switch (mode) {
    case ValidationMode::kStrict: return "strict";
    case ValidationMode::kPartitioned: return "partitioned";
    case ValidationMode::kNone: return "none";
  }
  return "";
}

std::optional<ValidationMode> parse_validation_mode(std::string_view name) {
  for (ValidationMode m :
       {ValidationMode::kStrict, ValidationMode::kPartitioned, ValidationMode::kNone}) {
    if (validation_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

RunConfig RunConfig::from_properties(const Properties& props) {
  RunConfig c;
  c.load = LoadSpec::from_properties(props);
  c.seed = static_cast<uint64_t>(props.get_int("seed", 1));
  c.load_data = props.get_bool("load", true);
  std::vector<std::string> names = split_list(props.get("workload", "all"));
  if (names.size() == 1 && names[0] == "all") {
    names.clear();
    for (WorkloadName n : kAllWorkloads) names.emplace_back(workload_name(n));
  }
  for (const std::string& n : names) {
    auto name = parse_workload_name(n);
    if (!name) invalid("unknown workload '" + n + "'");
    c.workloads.push_back(WorkloadSpec::from_properties(*name, props));
  }
  int64_t workers = props.get_int("threadcount", 1);
  if (workers < 1 || workers > static_cast<int64_t>(kLanes)) {
    invalid("threadcount must be within 1.." + std::to_string(kLanes));
  }
  c.worker_count = static_cast<uint32_t>(workers);
  c.validation = c.worker_count == 1 ? ValidationMode::kStrict : ValidationMode::kPartitioned;
  if (auto v = props.find("validation")) {
    auto mode = parse_validation_mode(*v);
    if (!mode) invalid("validation must be strict, partitioned or none");
    c.validation = *mode;
  }
  c.clock_step_ms = props.get_int("clockstep_ms", c.clock_step_ms);
  c.reap_interval_ms = props.get_int("reap_interval_ms", c.reap_interval_ms);
  c.abort_below_pct = props.get_double("abort_below_pct", c.abort_below_pct);
  c.abort_min_ops = static_cast<uint64_t>(props.get_int("abort_min_ops", 200));
  c.min_correctness_pct = props.get_double("min_correctness", c.min_correctness_pct);
  c.validate();
  return c;
}

void RunConfig::validate() const {
  load.validate();
  for (const WorkloadSpec& w : workloads) w.validate();
  if (worker_count < 1 || worker_count > kLanes) invalid("worker count out of range");
  if (validation == ValidationMode::kStrict && worker_count != 1) {
    invalid("strict validation requires a single worker");
  }
  if (!load_data && validation != ValidationMode::kNone) {
    invalid("validation needs the runner to insert the load itself (load=true)");
  }
  if (clock_step_ms < 0) invalid("clockstep_ms must not be negative");
  if (reap_interval_ms < 0) invalid("reap_interval_ms must not be negative");
}

double correctness_pct(uint64_t matched, uint64_t validated) {
  if (validated == 0) return 100.0;
  return 100.0 * static_cast<double>(matched) / static_cast<double>(validated);
}

MetricsReport compute_metrics(const RawRun& raw) {
  MetricsReport m;
  m.load_records = raw.load_records;
  m.load_errors = raw.load_errors;
  m.load_time_ms = static_cast<double>(raw.load_ns) / 1e6;
  m.aborted = raw.aborted;
  m.abort_reason = raw.abort_reason;
  m.space = raw.space;
  if (raw.space) m.space_factor = space_factor(raw.space->personal_data_bytes, raw.space->total_db_bytes);
  for (const WorkloadRun& run : raw.workloads) {
    WorkloadMetrics w;
    w.name = run.name;
    w.regenerated = run.regenerated;
    w.template_counts = run.template_counts;
    std::vector<int64_t> latencies;
    latencies.reserve(run.samples.size());
    for (const OpSample& s : run.samples) {
      ++w.attempted;
      if (s.code == ErrorCode::kOk) {
        ++w.succeeded;
      } else if (s.code == ErrorCode::kDenied) {
        ++w.denied;
      } else {
        ++w.errored;
      }
      w.validated += s.validated ? 1 : 0;
      w.matched += s.validated && s.matched ? 1 : 0;
      latencies.push_back(s.latency_ns);
    }
    int64_t busiest = 0;
    for (int64_t b : run.worker_busy_ns) busiest = std::max(busiest, b);
    w.completion_time_ms = static_cast<double>(busiest) / 1e6;
    w.wall_span_ms = static_cast<double>(run.wall_span_ns) / 1e6;
    w.latency = summarize(std::move(latencies));
    m.validated += w.validated;
    m.matched += w.matched;
    m.workloads.push_back(w);
  }
  m.correctness_pct = correctness_pct(m.matched, m.validated);
  return m;
}

BenchResult run_benchmark(const RunConfig& config, const DriverFactory& factory) {
  config.validate();
  std::vector<std::shared_ptr<BackendDriver>> drivers;
  for (uint32_t w = 0; w < config.worker_count; ++w) {
    drivers.push_back(factory(w));
    if (!drivers.back()) throw Error(ErrorCode::kDriverUnreachable, "no driver for worker");
  }
  BackendDriver& main = *drivers[0];

  Shared shared;
  shared.config = &config;
  shared.logical = main.logical_clock();
  shared.wall_anchor = Steady::now();
  shared.wall_base_ms = shared.logical ? 0 : main.now_ms();
  // The local wall reading can drift a little from the backend's.
  shared.slack_ms = shared.logical ? 0 : 20;
  if (config.validation == ValidationMode::kStrict && !shared.logical) {
    invalid("strict validation needs a backend on the logical clock");
  }
  auto now_ms = [&]() { return shared.logical ? main.now_ms() : shared.wall_now(); };

  std::vector<Oracle> oracles;
  if (config.validation != ValidationMode::kNone) {
    bool auditing = true;
    std::optional<FeatureReport> features;
    if (config.validation == ValidationMode::kStrict) {
      GdprQuery probe = GdprQuery::system_features();
      QueryResponse r = main.execute(Role::controller("bench"), probe);
      if (!r.ok() || r.kind() != PayloadKind::kFeatures) {
        throw Error(ErrorCode::kDriverUnreachable, "backend did not report its features");
      }
      features = std::get<FeatureReport>(r.payload());
      auditing = features->get(Capability::kAuditing) != Support::kNone;
      // The oracle starts empty, so the backend must too.
      bool fresh = main.space_stats().record_count == 0;
      if (fresh && auditing) {
        QueryResponse logs =
            main.execute(Role::controller("bench"), GdprQuery::system_logs({0, now_ms()}));
        fresh = logs.ok() && logs.touched() == 1;
      }
      if (!fresh) invalid("strict validation needs a fresh backend");
    }
    oracles.reserve(config.worker_count);
    for (uint32_t w = 0; w < config.worker_count; ++w) {
      oracles.emplace_back(auditing);
      if (features) {
        oracles.back().set_features(*features);
        int64_t t = now_ms();
        oracles.back().apply(Role::controller("bench"), GdprQuery::system_features(), t);
        if (auditing) {
          oracles.back().apply(Role::controller("bench"), GdprQuery::system_logs({0, t}), t);
        }
      }
    }
  }

  BenchResult result;
  RawRun& raw = result.raw;
  raw.logical_clock = shared.logical;
  int64_t load_ms = now_ms();
  if (config.load_data) {
    Partition all{0, config.worker_count};
    Role loader = Role::controller("loader");
    auto t0 = Steady::now();
    uint64_t users = config.load.users();
    for (uint64_t i = 0; i < config.load.record_count; ++i) {
      GdprQuery q = load_query(config.load, i);
      QueryResponse r = main.execute(loader, q);
      ++raw.load_records;
      if (!r.ok()) ++raw.load_errors;
      if (!oracles.empty()) {
        uint64_t lane = (i % users) % kLanes;
        uint32_t owner = static_cast<uint32_t>(lane % all.workers);
        oracles[owner].apply(loader, q, load_ms);
      }
    }
    raw.load_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Steady::now() - t0).count();
  }

  std::vector<Worker> workers;
  workers.reserve(config.worker_count);
  for (uint32_t w = 0; w < config.worker_count; ++w) {
    workers.emplace_back(w, drivers[w],
                         WorkloadGenerator(config.load, Partition{w, config.worker_count}, load_ms),
                         oracles.empty() ? nullptr : &oracles[w], &shared, load_ms);
  }

  bool space_taken = false;
  for (const WorkloadSpec& spec : config.workloads) {
    if (shared.stop) break;
    std::vector<WorkerOutput> outputs(config.worker_count);
    if (config.worker_count == 1) {
      workers[0].run(spec, &outputs[0]);
    } else {
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(config.worker_count);
      for (uint32_t w = 0; w < config.worker_count; ++w) {
        threads.emplace_back([&, w] {
          try {
            workers[w].run(spec, &outputs[w]);
          } catch (...) {
            errors[w] = std::current_exception();
            shared.stop = true;
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    WorkloadRun run;
    run.name = spec.name;
    std::optional<Steady::time_point> first;
    Steady::time_point last{};
    for (WorkerOutput& out : outputs) {
      run.samples.insert(run.samples.end(), out.samples.begin(), out.samples.end());
      run.worker_busy_ns.push_back(out.busy_ns);
      run.regenerated += out.regenerated;
      for (std::size_t i = 0; i < kTemplateCount; ++i) run.template_counts[i] += out.counts[i];
      if (out.first_start) {
        if (!first || *out.first_start < *first) first = out.first_start;
        last = std::max(last, out.last_end);
      }
    }
    if (first) {
      run.wall_span_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(last - *first).count();
    }
    raw.workloads.push_back(std::move(run));
    if (spec.name == WorkloadName::kController && !space_taken) {
      raw.space = main.space_stats();
      space_taken = true;
    }
  }
  if (!space_taken) raw.space = main.space_stats();
  raw.aborted = shared.stop && !shared.abort_reason.empty();
  raw.abort_reason = shared.abort_reason;
  raw.mismatches = shared.mismatches;
  result.metrics = compute_metrics(raw);
  return result;
}

}  // namespace pds
