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


#include "pds/pds.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "pds/bench.hpp"
#include "pds/driver.hpp"
#include "pds/server.hpp"
#include "pds/service.hpp"
#include "pds/wire.hpp"
#include "pds/workload.hpp"

struct pds_store {
  std::shared_ptr<pds::GdprService> service;  // null for a remote backend
  std::string host;
  uint16_t port = 0;
  std::shared_ptr<pds::BackendDriver> driver;
};

struct pds_server {
  std::unique_ptr<pds::WireServer> server;
};

namespace {

thread_local std::string last_error;

pds_status fail(pds_status status, const std::string& message) {
  last_error = message;
  return status;
}

pds_status to_status(pds::ErrorCode code) { return static_cast<pds_status>(code); }

// Runs `body`, mapping exceptions to status codes.
template <typename F>
pds_status guarded(F&& body) {
  try {
    return body();
  } catch (const pds::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PDS_STORAGE_FAILURE, "out of memory");
  } catch (const std::exception& e) {
    return fail(PDS_INVALID_ARGUMENT, e.what());
  }
}

char* copy_out(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

std::string joined(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& line : lines) out.append(line).push_back('\n');
  return out;
}

pds::Properties props_of(const char* config) {
  return pds::Properties::parse(config == nullptr ? "" : config);
}

}  // namespace

extern "C" {

const char* pds_status_name(pds_status status) {
  if (status < PDS_OK || status > PDS_INVALID_ARGUMENT) return "UNKNOWN";
  return pds::error_code_name(static_cast<pds::ErrorCode>(status)).data();
}

const char* pds_last_error(void) { return last_error.c_str(); }

void pds_string_free(char* s) { std::free(s); }

pds_status pds_store_open(const char* config, pds_store** out) {
  if (out == nullptr) return fail(PDS_INVALID_ARGUMENT, "null out-parameter");
  *out = nullptr;
  return guarded([&] {
    auto service_config = pds::ServiceConfig::from_properties(props_of(config));
    auto store = std::make_unique<pds_store>();
    store->service = std::make_shared<pds::GdprService>(std::move(service_config));
    store->driver = std::make_shared<pds::EmbeddedDriver>(store->service);
    *out = store.release();
    return PDS_OK;
  });
}

pds_status pds_store_connect(const char* address, pds_store** out) {
  if (out == nullptr || address == nullptr) return fail(PDS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto store = std::make_unique<pds_store>();
    std::tie(store->host, store->port) = pds::parse_address(address);
    store->driver = std::make_shared<pds::RemoteDriver>(store->host, store->port);
    *out = store.release();
    return PDS_OK;
  });
}

void pds_store_close(pds_store* store) { delete store; }

pds_status pds_store_execute(pds_store* store, const char* request, char** response) {
  if (store == nullptr || request == nullptr || response == nullptr) {
    return fail(PDS_INVALID_ARGUMENT, "null argument");
  }
  *response = nullptr;
  return guarded([&] {
    pds::WireRequest req = pds::parse_request(request);
    pds::QueryResponse r = store->driver->execute(req.role, req.query);
    *response = copy_out(joined(pds::format_response(r)));
    return PDS_OK;
  });
}

pds_status pds_store_load(pds_store* store, const char* config, uint64_t* loaded) {
  if (store == nullptr) return fail(PDS_INVALID_ARGUMENT, "null store");
  return guarded([&] {
    pds::LoadSpec spec = pds::LoadSpec::from_properties(props_of(config));
    spec.validate();
    pds::Role controller = pds::Role::controller("loader");
    uint64_t ok = 0;
    std::string first_error;
    for (uint64_t i = 0; i < spec.record_count; ++i) {
      pds::QueryResponse r = store->driver->execute(controller, pds::load_query(spec, i));
      if (r.ok()) {
        ++ok;
      } else if (first_error.empty()) {
        first_error = std::string(pds::error_code_name(r.code())) + " " + r.message();
      }
    }
    if (loaded != nullptr) *loaded = ok;
    if (ok != spec.record_count) {
      return fail(PDS_STORAGE_FAILURE, std::to_string(spec.record_count - ok) +
                                           " records rejected; first: " + first_error);
    }
    return PDS_OK;
  });
}

pds_status pds_store_reap(pds_store* store, uint64_t* erased) {
  if (store == nullptr) return fail(PDS_INVALID_ARGUMENT, "null store");
  return guarded([&] {
    std::size_t n = store->driver->reap();
    if (erased != nullptr) *erased = n;
    return PDS_OK;
  });
}

pds_status pds_store_advance_clock(pds_store* store, int64_t delta_ms, int64_t* now_ms) {
  if (store == nullptr) return fail(PDS_INVALID_ARGUMENT, "null store");
  return guarded([&] {
    int64_t now = store->driver->advance_clock(delta_ms);
    if (now_ms != nullptr) *now_ms = now;
    return PDS_OK;
  });
}

pds_status pds_store_features(pds_store* store, char** text) {
  if (store == nullptr || text == nullptr) return fail(PDS_INVALID_ARGUMENT, "null argument");
  *text = nullptr;
  return guarded([&] {
    pds::QueryResponse r =
        store->driver->execute(pds::Role::controller(), pds::GdprQuery::system_features());
    if (!r.ok()) return fail(to_status(r.code()), r.message());
    std::vector<std::string> lines = pds::format_response(r);
    lines.erase(lines.begin());
    *text = copy_out(joined(lines));
    return PDS_OK;
  });
}

pds_status pds_store_space_stats(pds_store* store, char** line) {
  if (store == nullptr || line == nullptr) return fail(PDS_INVALID_ARGUMENT, "null argument");
  *line = nullptr;
  return guarded([&] {
    *line = copy_out(pds::format_space_stats(store->driver->space_stats()) + "\n");
    return PDS_OK;
  });
}

pds_status pds_server_start(pds_store* store, const char* host, uint16_t port, pds_server** out) {
  if (store == nullptr || out == nullptr) return fail(PDS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  if (!store->service) return fail(PDS_INVALID_ARGUMENT, "only an in-process store can be served");
  return guarded([&] {
    auto server = std::make_unique<pds_server>();
    server->server = std::make_unique<pds::WireServer>(store->service,
                                                       host == nullptr ? "127.0.0.1" : host, port);
    *out = server.release();
    return PDS_OK;
  });
}

uint16_t pds_server_port(const pds_server* server) {
  return server == nullptr ? 0 : server->server->port();
}

void pds_server_wait(pds_server* server) {
  if (server != nullptr) server->server->wait();
}

void pds_server_stop(pds_server* server) {
  if (server != nullptr) server->server->stop();
}

void pds_server_free(pds_server* server) { delete server; }

pds_status pds_bench_run(pds_store* store, const char* config, char** report, char** latencies) {
  if (store == nullptr) return fail(PDS_INVALID_ARGUMENT, "null store");
  if (report != nullptr) *report = nullptr;
  if (latencies != nullptr) *latencies = nullptr;
  return guarded([&] {
    pds::Properties props = props_of(config);
    pds::RunConfig run = pds::RunConfig::from_properties(props);
    bool timing = props.get_bool("report.timing", true);
    pds::DriverFactory factory;
    if (store->service) {
      factory = [driver = store->driver](uint32_t) { return driver; };
    } else {
      factory = [store](uint32_t worker) -> std::shared_ptr<pds::BackendDriver> {
        if (worker == 0) return store->driver;
        return std::make_shared<pds::RemoteDriver>(store->host, store->port);
      };
    }
    pds::BenchResult result = pds::run_benchmark(run, factory);
    if (report != nullptr) {
      *report = copy_out(pds::report_json(run, result.metrics, store->driver->name(), timing));
    }
    if (latencies != nullptr) *latencies = copy_out(pds::latency_csv(result.raw));
    if (!result.metrics.passed(run.min_correctness_pct)) {
      std::string why = result.metrics.aborted
                            ? result.metrics.abort_reason
                            : "correctness " + std::to_string(result.metrics.correctness_pct) +
                                  "% below " + std::to_string(run.min_correctness_pct) + "%";
      if (!result.raw.mismatches.empty()) why += "; first mismatch: " + result.raw.mismatches[0];
      return fail(PDS_VALIDATION_ABORT, why);
    }
    return PDS_OK;
  });
}

}  // extern "C"
