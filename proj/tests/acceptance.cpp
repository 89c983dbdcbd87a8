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


// Acceptance gate: each criterion prints one PASS/FAIL line; the exit code is
// the number of failures. Criterion ids given as arguments restrict the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pds/bench.hpp"
#include "pds/server.hpp"
#include "pds/service.hpp"
#include "pds/wire.hpp"
#include "pds/workload.hpp"
#include "role_table.hpp"
#include "test_util.hpp"

namespace pds {
namespace {

using testing::kExampleLine;

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool cond, const std::string& why) {
    if (!cond && pass) {
      pass = false;
      detail = why;
    }
  }
};

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

std::shared_ptr<GdprService> logical_service(std::set<IndexedAttribute> indexes = {
                                                 std::begin(kAllIndexes), std::end(kAllIndexes)}) {
  ServiceConfig config;
  config.store = testing::logical_config();
  config.store.index_attributes = std::move(indexes);
  return std::make_shared<GdprService>(config);
}

DriverFactory embedded(std::shared_ptr<GdprService> service) {
  auto driver = std::make_shared<EmbeddedDriver>(std::move(service));
  return [driver](uint32_t) { return driver; };
}

std::vector<std::string> sorted_lines(const QueryResponse& r) {
  std::vector<std::string> lines = format_response(r);
  std::sort(lines.begin(), lines.end());
  return lines;
}

Outcome record_format() {
  Outcome out;
  PersonalRecord r = parse_record(kExampleLine);
  out.expect(r.key == "ph-1x4b" && r.data == "123-456-7890", "key/data");
  out.expect(r.meta.pur == TokenSet{"ads", "2fa"} && r.meta.ttl == 7776000, "PUR/TTL");
  out.expect(r.meta.usr == "neo" && r.meta.src == TokenSet{"first-party"}, "USR/SRC");
  out.expect(r.meta.obj.empty() && r.meta.dec.empty() && r.meta.shr.empty(), "OBJ/DEC/SHR");
  const std::string canonical =
      "ph-1x4b;123-456-7890;PUR=2fa,ads;TTL=7776000;USR=neo;OBJ=;DEC=;SHR=;SRC=first-party;";
  out.expect(serialize_record(r) == canonical, "serialized " + serialize_record(r));
  out.expect(parse_record(canonical) == r, "canonical reparse");

  std::mt19937_64 rng(7);
  auto random_set = [&]() {
    TokenSet s;
    for (int i = static_cast<int>(rng() % 5); i > 0; --i) s.insert(testing::random_token(rng));
    return s;
  };
  int ok = 0;
  for (int i = 0; i < 1000; ++i) {
    PersonalRecord p;
    p.key = testing::random_token(rng);
    p.data = testing::random_token(rng, 40);
    p.meta.pur = random_set();
    p.meta.ttl = static_cast<int64_t>(rng() % (kMaxTtlSeconds + 1));
    p.meta.usr = testing::random_token(rng);
    p.meta.obj = random_set();
    p.meta.dec = random_set();
    p.meta.shr = random_set();
    p.meta.src = random_set();
    std::string line = serialize_record(p);
    PersonalRecord back = parse_record(line);
    if (back == p && serialize_record(back) == line) ++ok;
  }
  out.expect(ok == 1000, std::to_string(ok) + "/1000 random round trips");
  if (out.pass) out.detail = "example fields exact; 1000/1000 random round trips";
  return out;
}

Outcome workload_mix() {
  Outcome out;
  double worst = 0;
  LoadSpec load;
  for (WorkloadName name : kAllWorkloads) {
    WorkloadSpec spec = WorkloadSpec::standard(name);
    spec.operation_count = 100000;
    spec.seed = 2026;
    WorkloadGenerator gen(load, Partition{}, 0);
    gen.begin(spec, 50);
    int64_t now = 50;
    uint64_t drawn = 0;
    while (auto op = gen.next(now)) {
      drawn += op->regenerated ? 0 : 1;
      now += 50;
    }
    out.expect(drawn == spec.operation_count, std::string(workload_name(name)) + " op count");
    for (const auto& tw : spec.mix) {
      double pct = 100.0 * gen.template_counts()[static_cast<std::size_t>(tw.tmpl)] /
                   static_cast<double>(spec.operation_count);
      double err = std::abs(pct - tw.weight);
      worst = std::max(worst, err);
      out.expect(err <= 0.3, std::string(workload_name(name)) + " " +
                                 std::string(template_name(tw.tmpl)) + fmt(" %.3f%%", pct));
    }
  }
  if (out.pass) out.detail = fmt("4 workloads x 100k ops, worst deviation %.3fpp", worst);
  return out;
}

Outcome zipf_sampler() {
  Outcome out;
  const double expected[] = {6.0 / 11.0, 3.0 / 11.0, 2.0 / 11.0};
  RankSampler sampler(DistributionSpec::zipf(3, 1.0));
  Rng rng(99);
  std::vector<double> freq(3, 0.0);
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) freq[sampler.sample(rng) - 1] += 1.0;
  double worst = 0;
  for (int i = 0; i < 3; ++i) {
    double err = std::abs(freq[i] / draws - expected[i]);
    worst = std::max(worst, err);
    out.expect(err <= 0.005, fmt("rank %.0f off by %.5f", i + 1, err));
  }
  if (out.pass) out.detail = fmt("10^6 draws, max |p - p*| = %.5f", worst);
  return out;
}

Outcome oracle_equivalence() {
  Outcome out;
  std::string seeds;
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    RunConfig config;
    config.load.record_count = 100000;
    config.load.seed = seed;
    config.seed = seed;
    for (WorkloadName name : kAllWorkloads) {
      WorkloadSpec spec = WorkloadSpec::standard(name);
      spec.operation_count = 10000;
      spec.seed = seed;
      config.workloads.push_back(spec);
    }
    BenchResult result = run_benchmark(config, embedded(logical_service()));
    const MetricsReport& m = result.metrics;
    out.expect(m.load_records == 100000 && m.load_errors == 0, "load failed");
    out.expect(m.correctness_pct == 100.0 && !m.aborted,
               fmt("seed %.0f correctness %.4f%%", static_cast<double>(seed), m.correctness_pct) +
                   (result.raw.mismatches.empty() ? "" : ": " + result.raw.mismatches[0]));
    seeds += (seeds.empty() ? "" : ",") + std::to_string(seed);
    for (const WorkloadMetrics& w : m.workloads) {
      out.expect(w.validated == w.attempted && w.attempted >= 10000, "unvalidated ops");
    }
  }
  if (out.pass) out.detail = "seeds " + seeds + ": 100.0% of 4x10k ops each";
  return out;
}

Outcome strict_ttl() {
  Outcome out;
  ServiceConfig config;
  config.store.clock_mode = ClockMode::kWall;
  config.store.reap_interval_ms = 500;
  auto service = std::make_shared<GdprService>(config);
  LoadSpec load;
  load.record_count = 100000;
  load.ttl_short_s = 2;
  std::vector<std::string> short_keys;
  for (uint64_t i = 0; i < load.record_count; ++i) {
    PersonalRecord r = load.record(i);
    if (r.meta.ttl == load.ttl_short_s) short_keys.push_back(r.key);
    QueryResponse resp = service->execute(Role::controller(), GdprQuery::create(std::move(r)));
    if (!resp.ok()) return {false, "load failed: " + resp.message()};
  }
  out.expect(short_keys.size() == 20000, std::to_string(short_keys.size()) + " short records");
  // The last short record expires at most 2 s after loading finished.
  std::this_thread::sleep_for(std::chrono::milliseconds(3600));
  int64_t worst = -1;
  std::size_t erased = 0;
  for (const std::string& key : short_keys) {
    QueryResponse r = service->execute(Role::regulator("dpa"), GdprQuery::verify_deletion(key));
    if (!r.ok() || r.kind() != PayloadKind::kDeletion) {
      out.expect(false, "verify-deletion failed for " + key);
      continue;
    }
    const DeletionStatus& s = std::get<DeletionStatus>(r.payload());
    if (!s.erased || !s.latency_ms) {
      out.expect(false, key + " not erased");
      continue;
    }
    ++erased;
    worst = std::max(worst, *s.latency_ms);
    out.expect(*s.latency_ms >= 0 && *s.latency_ms < 1000,
               key + fmt(" erased %.0f ms after expiry", static_cast<double>(*s.latency_ms)));
  }
  out.expect(service->store().size() == 80000, "long-lived records were erased");
  if (out.pass) {
    out.detail = std::to_string(erased) + " expired records, max erasure latency " +
                 std::to_string(worst) + " ms (wall clock, reaper every 500 ms)";
  }
  return out;
}

Outcome audit_completeness() {
  Outcome out;
  auto service = logical_service();
  std::mt19937_64 rng(31);
  const std::vector<Role> roles = {Role::controller(), Role::customer("u1"), Role::customer("u2"),
                                   Role::processor("ml"), Role::regulator("dpa")};
  const Attribute attrs[] = {Attribute::kPur, Attribute::kObj, Attribute::kDec, Attribute::kShr};
  uint64_t denied = 0;
  std::vector<ErrorCode> codes;
  for (int i = 0; i < 10000; ++i) {
    service->logical_clock()->advance(static_cast<int64_t>(rng() % 20));
    const Role& role = roles[rng() % roles.size()];
    std::string key = "k" + std::to_string(rng() % 300);
    std::string user = "u" + std::to_string(rng() % 3);
    GdprQuery q;
    switch (rng() % 8) {
      case 0:
        q = GdprQuery::create(testing::make_record(key, user, {"p" + std::to_string(rng() % 4)},
                                                   static_cast<int64_t>(rng() % 100)));
        break;
      case 1: {
        Family f = kAllFamilies[rng() % std::size(kAllFamilies)];
        Dimension d = kAllDimensions[rng() % std::size(kAllDimensions)];
        q = GdprQuery::select(f, d, rng() % 2 ? key : user);
        break;
      }
      case 2:
        q = GdprQuery::update_metadata(Dimension::kKey, key, {attrs[rng() % 4], EditOp::kAdd, {"x"}});
        break;
      case 3:
        q = GdprQuery::verify_deletion(key);
        break;
      case 4:
        q = GdprQuery::update_data(key, "d" + std::to_string(i));
        break;
      case 5: {
        int64_t now = service->clock().now_ms();
        q = GdprQuery::system_logs({now / 2, now});
        break;
      }
      default:
        q = GdprQuery::select(rng() % 2 ? Family::kReadData : Family::kDeleteRecord,
                              rng() % 2 ? Dimension::kKey : Dimension::kUsr,
                              rng() % 2 ? key : user);
        break;
    }
    QueryResponse r = service->execute(role, q);
    codes.push_back(r.code());
    denied += r.code() == ErrorCode::kDenied ? 1 : 0;
  }
  std::vector<AuditEntry> log = service->audit().entries();
  out.expect(log.size() == 10000, std::to_string(log.size()) + " audit entries");
  uint64_t logged_denied = 0;
  for (std::size_t i = 0; i < log.size() && i < codes.size(); ++i) {
    out.expect(log[i].seq == i + 1, "seq gap at " + std::to_string(i));
    out.expect(i == 0 || log[i].timestamp_ms >= log[i - 1].timestamp_ms, "timestamps regress");
    out.expect(log[i].outcome == (codes[i] == ErrorCode::kDenied
                                      ? std::string("DENIED")
                                      : std::string(error_code_name(codes[i]))),
               "outcome mismatch at seq " + std::to_string(log[i].seq));
    logged_denied += log[i].outcome == "DENIED" ? 1 : 0;
  }
  out.expect(denied > 0 && logged_denied == denied, "denied attempts not all audited");
  int64_t end = log.empty() ? 0 : log.back().timestamp_ms;
  int ranges = 0;
  for (int i = 0; i < 200; ++i) {
    int64_t a = static_cast<int64_t>(rng() % static_cast<uint64_t>(end + 1));
    int64_t b = a + static_cast<int64_t>(rng() % static_cast<uint64_t>(end / 4 + 1));
    std::vector<AuditEntry> want;
    for (const AuditEntry& e : log) {
      if (e.timestamp_ms >= a && e.timestamp_ms <= b) want.push_back(e);
    }
    out.expect(service->audit().get_system_logs(a, b) == want, fmt("range [%.0f, %.0f]", a, b));
    ++ranges;
  }
  if (out.pass) {
    out.detail = "10000 entries, seq 1..10000, " + std::to_string(denied) + " denied audited, " +
                 std::to_string(ranges) + " sub-ranges match";
  }
  return out;
}

// Default-size records, then controller edits so every indexed attribute
// carries tokens: a tenth of the users object to automated decisions, a
// tenth get decision tags and a fifth share with a partner.
double loaded_space_factor(std::set<IndexedAttribute> indexes) {
  auto service = logical_service(std::move(indexes));
  LoadSpec load;
  load.record_count = 20000;
  for (uint64_t i = 0; i < load.record_count; ++i) {
    service->execute(Role::controller(), GdprQuery::create(load.record(i)));
  }
  for (uint64_t u = 0; u < load.users(); ++u) {
    std::string user = load.record(u).meta.usr;
    auto edit = [&](Attribute attr, std::string value) {
      service->execute(Role::controller(),
                       GdprQuery::update_metadata(Dimension::kUsr, user,
                                                  {attr, EditOp::kAdd, {std::move(value)}}));
    };
    if (u % 10 == 0) edit(Attribute::kObj, std::string(kAutomatedObjection));
    if (u % 10 == 1) edit(Attribute::kDec, "credit-score");
    if (u % 5 == 2) edit(Attribute::kShr, "partner-" + std::to_string(u % 7));
  }
  return service->store().space_stats().space_factor;
}

Outcome space_factor_bounds() {
  Outcome out;
  const uint64_t mb = 1000000;
  RawRun raw;
  raw.space = SpaceStats{};
  raw.space->personal_data_bytes = 10 * mb;
  raw.space->total_db_bytes = 35 * mb;
  double a = compute_metrics(raw).space_factor;
  raw.space->total_db_bytes = 59500000;
  double b = compute_metrics(raw).space_factor;
  out.expect(a == 3.5 && b == 5.95, fmt("computed %.6f and %.6f", a, b));

  std::set<IndexedAttribute> indexes;
  double previous = loaded_space_factor(indexes);
  std::string chain = fmt("%.3f", previous);
  out.expect(previous >= 3.0, fmt("no-index factor %.3f", previous));
  for (IndexedAttribute attr : kAllIndexes) {
    indexes.insert(attr);
    double next = loaded_space_factor(indexes);
    out.expect(next > previous, "adding " + std::string(indexed_attribute_name(attr)) +
                                    fmt(" gave %.4f after %.4f", next, previous));
    chain += " -> " + fmt("%.3f", next);
    previous = next;
  }
  if (out.pass) out.detail = "3.5 and 5.95 exact; live factor " + chain;
  return out;
}

double customer_completion_ms(uint64_t records, bool indexed) {
  double best = 0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    RunConfig config;
    config.load.record_count = records;
    config.validation = ValidationMode::kNone;
    WorkloadSpec spec = WorkloadSpec::standard(WorkloadName::kCustomer);
    spec.operation_count = 10000;
    config.workloads.push_back(spec);
    std::set<IndexedAttribute> indexes;
    if (indexed) indexes = {std::begin(kAllIndexes), std::end(kAllIndexes)};
    BenchResult result = run_benchmark(config, embedded(logical_service(indexes)));
    double ms = result.metrics.workloads.at(0).completion_time_ms;
    best = attempt == 0 ? ms : std::min(best, ms);
  }
  return best;
}

Outcome scale_trend() {
  Outcome out;
  double plain_small = customer_completion_ms(50000, false);
  double plain_large = customer_completion_ms(250000, false);
  double full_small = customer_completion_ms(50000, true);
  double full_large = customer_completion_ms(250000, true);
  double plain = plain_large / plain_small;
  double full = full_large / full_small;
  out.expect(plain >= 3.0, fmt("no-index slowdown %.2fx (%.1f -> %.1f ms)", plain, plain_small,
                               plain_large));
  out.expect(full <= 2.0, fmt("indexed slowdown %.2fx (%.1f -> %.1f ms)", full, full_small,
                              full_large));
  if (out.pass) {
    out.detail = fmt("50k -> 250k records: no index %.2fx, full index %.2fx", plain, full);
  }
  return out;
}

Outcome role_matrix() {
  Outcome out;
  const std::vector<Role> roles = {Role::controller(), Role::customer("neo"),
                                   Role::processor("ml"), Role::regulator("dpa")};
  const Attribute attrs[] = {Attribute::kPur, Attribute::kTtl, Attribute::kUsr, Attribute::kObj,
                             Attribute::kDec, Attribute::kShr, Attribute::kSrc};
  const EditOp ops[] = {EditOp::kAdd, EditOp::kRemove, EditOp::kSet};
  int checked = 0;
  for (const Role& role : roles) {
    for (Family f : kAllFamilies) {
      for (Dimension d : kAllDimensions) {
        if (!is_valid_pair(f, d)) continue;
        for (const char* token : {"neo", "morpheus"}) {
          for (Attribute attr : attrs) {
            for (EditOp op : ops) {
              GdprQuery q = GdprQuery::select(f, d, token);
              q.edit = {attr, op, {"x"}};
              Verdict got = authorize(role, q).verdict;
              out.expect(got == testing::reference_verdict(role, q),
                         role.to_string() + " " + q.name() + " " + token + " " +
                             std::string(attribute_name(attr)));
              ++checked;
            }
          }
        }
      }
    }
  }
  auto service = logical_service();
  service->execute(Role::controller(),
                   GdprQuery::create(testing::make_record("k1", "neo", {"ads"})));
  int regulator_probes = 0;
  for (Dimension d : kAllDimensions) {
    if (!is_valid_pair(Family::kReadData, d)) continue;
    for (const char* token : {"k1", "neo", "ads"}) {
      QueryResponse r =
          service->execute(Role::regulator("dpa"), GdprQuery::select(Family::kReadData, d, token));
      out.expect(r.code() == ErrorCode::kDenied && r.kind() == PayloadKind::kNone,
                 "regulator read " + std::string(dimension_name(d)));
      ++regulator_probes;
    }
  }
  auto record = std::make_shared<const PersonalRecord>(testing::make_record("k", "u"));
  out.expect(QueryResponse::records(Role::regulator("dpa"), {record}).kind() == PayloadKind::kNone,
             "record payload built for a regulator");
  if (out.pass) {
    out.detail = std::to_string(checked) + " (role, query, edit) cases agree; " +
                 std::to_string(regulator_probes) + " regulator data reads denied";
  }
  return out;
}

Outcome driver_equivalence() {
  Outcome out;
  auto served = logical_service();
  WireServer server(served, "127.0.0.1", 0);
  RemoteDriver remote("127.0.0.1", server.port());
  EmbeddedDriver local(logical_service());

  LoadSpec load;
  load.record_count = 5000;
  load.ttl_short_s = 30;
  std::size_t compared = 0;
  auto both = [&](const Role& role, const GdprQuery& q) {
    QueryResponse a = local.execute(role, q);
    QueryResponse b = remote.execute(role, q);
    out.expect(a.code() == b.code(), q.name() + " class " + std::string(error_code_name(a.code())) +
                                         " vs " + std::string(error_code_name(b.code())));
    out.expect(sorted_lines(a) == sorted_lines(b), q.name() + " result set differs");
    ++compared;
  };
  for (uint64_t i = 0; i < load.record_count; ++i) {
    both(Role::controller(), GdprQuery::create(load.record(i)));
  }
  compared = 0;
  WorkloadGenerator gen(load, Partition{}, 0);
  int64_t now = 0;
  for (WorkloadName name : kAllWorkloads) {
    WorkloadSpec spec = WorkloadSpec::standard(name);
    spec.operation_count = 1250;
    spec.seed = 17;
    gen.begin(spec, now);
    while (true) {
      int64_t a = local.advance_clock(50);
      int64_t b = remote.advance_clock(50);
      out.expect(a == b, "clocks diverged");
      if (a / 500 != now / 500) out.expect(local.reap() == remote.reap(), "reap counts differ");
      now = a;
      std::optional<GeneratedOp> op = gen.next(now);
      if (!op) break;
      both(op->role, op->query);
    }
  }
  out.expect(compared >= 5000, std::to_string(compared) + " ops compared");
  out.expect(local.space_stats().total_db_bytes == remote.space_stats().total_db_bytes,
             "space accounting differs");
  server.stop();
  if (out.pass) {
    out.detail = std::to_string(compared) + " ops: identical response classes and result sets";
  }
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace pds

int main(int argc, char** argv) {
  using pds::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "record format fidelity", pds::record_format},
      {2, "workload mix fidelity", pds::workload_mix},
      {3, "zipf sampler", pds::zipf_sampler},
      {4, "oracle equivalence (strict, 5 seeds)", pds::oracle_equivalence},
      {5, "strict TTL bound", pds::strict_ttl},
      {6, "audit completeness", pds::audit_completeness},
      {7, "space factor arithmetic and bounds", pds::space_factor_bounds},
      {8, "scale trend", pds::scale_trend},
      {9, "role matrix soundness", pds::role_matrix},
      {10, "driver equivalence", pds::driver_equivalence},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && only.count(c.id) == 0) continue;
    auto start = std::chrono::steady_clock::now();
    pds::Outcome result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.1fs)\n", result.pass ? "PASS" : "FAIL", c.id, c.name,
                result.detail.c_str(), secs);
    std::fflush(stdout);
    failures += result.pass ? 0 : 1;
  }
  return failures;
}
