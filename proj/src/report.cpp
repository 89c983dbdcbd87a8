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

#include <cstdio>

#include "json.hpp"
#include "pds/bench.hpp"

namespace pds {

namespace {

using Json = nlohmann::ordered_json;

Json space_json(const SpaceStats& s) {
  Json j;
  j["records"] = s.record_count;
  j["personal_data_bytes"] = s.personal_data_bytes;
  j["key_bytes"] = s.key_bytes;
  j["metadata_bytes"] = s.metadata_bytes;
  j["index_bytes"] = s.index_bytes;
  j["total_db_bytes"] = s.total_db_bytes;
  return j;
}

}  // namespace

std::string report_json(const RunConfig& config, const MetricsReport& metrics,
                        const std::string& driver_name, bool include_timing) {
  Json doc;
  doc["schema"] = "pdstore-report/1";

  Json cfg;
  cfg["driver"] = driver_name;
  cfg["seed"] = config.seed;
  cfg["validation"] = validation_mode_name(config.validation);
  cfg["threadcount"] = config.worker_count;
  cfg["clockstep_ms"] = config.clock_step_ms;
  cfg["reap_interval_ms"] = config.reap_interval_ms;
  cfg["recordcount"] = config.load.record_count;
  cfg["usercount"] = config.load.users();
  cfg["purposecount"] = config.load.purposes();
  cfg["keylength"] = config.load.key_length;
  cfg["fieldlength"] = config.load.data_length;
  cfg["ttl_short_s"] = config.load.ttl_short_s;
  cfg["ttl_long_s"] = config.load.ttl_long_s;
  cfg["ttl_short_share"] = config.load.ttl_short_share;
  Json workloads = Json::array();
  for (const WorkloadSpec& w : config.workloads) {
    Json wj;
    wj["name"] = workload_name(w.name);
    wj["operationcount"] = w.operation_count;
    wj["distribution"] = distribution_name(w.distribution);
    wj["zipf_theta"] = w.zipf_theta;
    Json mix;
    for (const auto& tw : w.mix) mix[std::string(template_name(tw.tmpl))] = tw.weight;
    wj["mix"] = mix;
    workloads.push_back(wj);
  }
  cfg["workloads"] = workloads;
  doc["config"] = cfg;

  Json load;
  load["records"] = metrics.load_records;
  load["errors"] = metrics.load_errors;
  doc["load"] = load;

  Json m;
  m["correctness_pct"] = metrics.correctness_pct;
  m["validated"] = metrics.validated;
  m["matched"] = metrics.matched;
  m["space_factor"] = metrics.space_factor;
  if (metrics.space) m["space"] = space_json(*metrics.space);
  Json per = Json::array();
  for (const WorkloadMetrics& w : metrics.workloads) {
    Json wj;
    wj["name"] = workload_name(w.name);
    wj["attempted"] = w.attempted;
    wj["succeeded"] = w.succeeded;
    wj["denied"] = w.denied;
    wj["errored"] = w.errored;
    wj["regenerated"] = w.regenerated;
    wj["validated"] = w.validated;
    wj["matched"] = w.matched;
    Json counts;
    for (std::size_t i = 0; i < kTemplateCount; ++i) {
      if (w.template_counts[i] > 0) {
        counts[std::string(template_name(static_cast<Template>(i)))] = w.template_counts[i];
      }
    }
    wj["templates"] = counts;
    per.push_back(wj);
  }
  m["workloads"] = per;
  doc["metrics"] = m;
  doc["aborted"] = metrics.aborted;
  if (metrics.aborted) doc["abort_reason"] = metrics.abort_reason;

  if (include_timing) {
    Json t;
    t["load_ms"] = metrics.load_time_ms;
    Json tw = Json::array();
    for (const WorkloadMetrics& w : metrics.workloads) {
      Json wj;
      wj["name"] = workload_name(w.name);
      wj["completion_time_ms"] = w.completion_time_ms;
      wj["wall_span_ms"] = w.wall_span_ms;
      wj["latency_us"] = {{"mean", w.latency.mean_us},
                          {"p50", w.latency.p50_us},
                          {"p99", w.latency.p99_us},
                          {"max", w.latency.max_us}};
      tw.push_back(wj);
    }
    t["workloads"] = tw;
    doc["timing"] = t;
  }
  return doc.dump(2) + "\n";
}

std::string latency_csv(const RawRun& raw) {
  std::string out = "workload,worker,seq,template,latency_us,outcome\n";
  char buf[64];
  for (const WorkloadRun& run : raw.workloads) {
    std::string prefix = std::string(workload_name(run.name)) + ",";
    for (const OpSample& s : run.samples) {
      out += prefix;
      out += std::to_string(s.worker) + "," + std::to_string(s.seq) + ",";
      out += template_name(s.tmpl);
      std::snprintf(buf, sizeof(buf), ",%.3f,", static_cast<double>(s.latency_ns) / 1000.0);
      out += buf;
      out += error_code_name(s.code);
      out += "\n";
    }
  }
  return out;
}

}  // namespace pds
