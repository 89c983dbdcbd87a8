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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pds/driver.hpp"
#include "pds/properties.hpp"
#include "pds/workload.hpp"

namespace pds {

// kStrict: one worker on a fresh logical-clock backend, every response
// compared exactly with the shadow oracle. kPartitioned: one oracle per
// worker partition; key and user scoped queries are exact up to records
// whose expiry races the call, every other selector gets predicate checks.
// kNone: timing only.
enum class ValidationMode { kStrict, kPartitioned, kNone };

std::string_view validation_mode_name(ValidationMode mode);
std::optional<ValidationMode> parse_validation_mode(std::string_view name);

struct RunConfig {
  LoadSpec load;
  bool load_data = true;
  std::vector<WorkloadSpec> workloads;
  uint32_t worker_count = 1;
  ValidationMode validation = ValidationMode::kStrict;
  // Logical-clock backends advance this much per operation and are reaped
  // whenever the reading crosses a multiple of reap_interval_ms.
  int64_t clock_step_ms = 50;
  int64_t reap_interval_ms = 500;
  // Stop early once this many responses were validated and correctness is
  // below abort_below_pct.
  double abort_below_pct = 99.0;
  uint64_t abort_min_ops = 200;
  // Correctness below this fails the run (CLI exit 1).
  double min_correctness_pct = 100.0;
  uint64_t seed = 1;

  // Keys: everything LoadSpec and WorkloadSpec read, plus workload
  // (comma list or `all`), threadcount, validation, clockstep_ms,
  // reap_interval_ms, abort_below_pct, min_correctness, load.
  static RunConfig from_properties(const Properties& props);
  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct OpSample {
  uint32_t worker = 0;
  uint64_t seq = 0;
  Template tmpl = Template::kCreateRecord;
  bool regenerated = false;
  int64_t latency_ns = 0;
  ErrorCode code = ErrorCode::kOk;
  bool validated = false;
  bool matched = false;
};

struct WorkloadRun {
  WorkloadName name = WorkloadName::kController;
  std::vector<OpSample> samples;
  // Sum of driver-call spans per worker.
  std::vector<int64_t> worker_busy_ns;
  // First operation start to last operation end.
  int64_t wall_span_ns = 0;
  uint64_t regenerated = 0;
  std::array<uint64_t, kTemplateCount> template_counts{};
};

struct RawRun {
  uint64_t load_records = 0;
  uint64_t load_errors = 0;
  int64_t load_ns = 0;
  bool logical_clock = false;
  std::vector<WorkloadRun> workloads;
  std::optional<SpaceStats> space;
  bool aborted = false;
  std::string abort_reason;
  // First few mismatch descriptions, for diagnostics.
  std::vector<std::string> mismatches;
};

struct LatencySummary {
  double mean_us = 0;
  double p50_us = 0;
  double p99_us = 0;
  double max_us = 0;
};

struct WorkloadMetrics {
  WorkloadName name = WorkloadName::kController;
  uint64_t attempted = 0;
  uint64_t succeeded = 0;
  uint64_t denied = 0;
  uint64_t errored = 0;
  uint64_t regenerated = 0;
  uint64_t validated = 0;
  uint64_t matched = 0;
  std::array<uint64_t, kTemplateCount> template_counts{};
  // Slowest worker's summed driver-call time.
  double completion_time_ms = 0;
  double wall_span_ms = 0;
  LatencySummary latency;
};

struct MetricsReport {
  double correctness_pct = 100.0;
  uint64_t validated = 0;
  uint64_t matched = 0;
  double space_factor = 0;
  std::optional<SpaceStats> space;
  std::vector<WorkloadMetrics> workloads;
  uint64_t load_records = 0;
  uint64_t load_errors = 0;
  double load_time_ms = 0;
  bool aborted = false;
  std::string abort_reason;

  bool passed(double min_correctness_pct) const {
    return !aborted && load_errors == 0 && correctness_pct >= min_correctness_pct;
  }
};

// Pure arithmetic over a finished run.
MetricsReport compute_metrics(const RawRun& raw);

double correctness_pct(uint64_t matched, uint64_t validated);

// Returns the driver for a worker. Workers may share one driver if it is
// safe for concurrent use.
using DriverFactory = std::function<std::shared_ptr<BackendDriver>(uint32_t worker)>;

struct BenchResult {
  RawRun raw;
  MetricsReport metrics;
};

// Loads (if configured) and runs each workload in order against a fresh
// backend. Throws Error(kInvalidArgument) for bad configs and
// Error(kDriverUnreachable) when the backend goes away.
BenchResult run_benchmark(const RunConfig& config, const DriverFactory& factory);

// Stable JSON document: config echo, load summary, metrics, and (unless
// omitted) a separate "timing" object holding every clock-dependent value.
std::string report_json(const RunConfig& config, const MetricsReport& metrics,
                        const std::string& driver_name, bool include_timing = true);

// workload,worker,seq,template,latency_us,outcome
std::string latency_csv(const RawRun& raw);

}  // namespace pds
