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


// pdstore: load data, run workloads, serve the store, reap, report.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration or backend
// error.

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pds/pds.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string properties_file;
  std::vector<std::string> overrides;
  std::string seed;
  std::string address;
  std::string report_path;
  std::string latency_path;
  std::string listen = "127.0.0.1:7788";
  std::string input;
};

int report_failure(const char* what, pds_status status) {
  std::cerr << "pdstore: " << what << ": " << pds_status_name(status) << ": " << pds_last_error()
            << "\n";
  return status == PDS_VALIDATION_ABORT ? kExitValidation : kExitConfig;
}

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  return static_cast<bool>(out);
}

// Property file first, then -p overrides and --seed, so later lines win.
bool config_text(const Options& opt, std::string* out) {
  std::string text;
  if (!opt.properties_file.empty() && !read_file(opt.properties_file, &text)) {
    std::cerr << "pdstore: cannot read property file " << opt.properties_file << "\n";
    return false;
  }
  text.push_back('\n');
  for (const std::string& o : opt.overrides) {
    if (o.find('=') == std::string::npos || o.find('\n') != std::string::npos) {
      std::cerr << "pdstore: override '" << o << "' is not key=value\n";
      return false;
    }
    text.append(o).push_back('\n');
  }
  if (!opt.seed.empty()) text.append("seed=").append(opt.seed).push_back('\n');
  *out = text;
  return true;
}

class Store {
 public:
  ~Store() { pds_store_close(store_); }

  pds_status open(const Options& opt, const std::string& config) {
    if (!opt.address.empty()) return pds_store_connect(opt.address.c_str(), &store_);
    return pds_store_open(config.c_str(), &store_);
  }
  pds_store* get() const { return store_; }

 private:
  pds_store* store_ = nullptr;
};

// Takes ownership of a returned C string.
std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  pds_string_free(s);
  return out;
}

int cmd_load(const Options& opt, const std::string& config) {
  Store store;
  if (pds_status st = store.open(opt, config); st != PDS_OK) return report_failure("open", st);
  uint64_t loaded = 0;
  pds_status st = pds_store_load(store.get(), config.c_str(), &loaded);
  std::cout << "loaded " << loaded << " records\n";
  return st == PDS_OK ? kExitOk : report_failure("load", st);
}

int cmd_run(const Options& opt, const std::string& config) {
  Store store;
  if (pds_status st = store.open(opt, config); st != PDS_OK) return report_failure("open", st);
  char* report = nullptr;
  char* latencies = nullptr;
  pds_status st = pds_bench_run(store.get(), config.c_str(), &report,
                                opt.latency_path.empty() ? nullptr : &latencies);
  std::string report_text = take(report);
  std::string latency_text = take(latencies);
  if (!report_text.empty()) {
    if (opt.report_path.empty()) {
      std::cout << report_text;
    } else if (!write_file(opt.report_path, report_text)) {
      std::cerr << "pdstore: cannot write " << opt.report_path << "\n";
      return kExitConfig;
    }
  }
  if (!opt.latency_path.empty() && !latency_text.empty() &&
      !write_file(opt.latency_path, latency_text)) {
    std::cerr << "pdstore: cannot write " << opt.latency_path << "\n";
    return kExitConfig;
  }
  return st == PDS_OK ? kExitOk : report_failure("run", st);
}

int cmd_serve(const Options& opt, const std::string& config) {
  std::string host = opt.listen;
  uint16_t port = 0;
  std::size_t colon = opt.listen.rfind(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("no port");
    host = opt.listen.substr(0, colon);
    unsigned long p = std::stoul(opt.listen.substr(colon + 1));
    if (p > 65535) throw std::out_of_range("port");
    port = static_cast<uint16_t>(p);
  } catch (const std::exception&) {
    std::cerr << "pdstore: --listen wants host:port\n";
    return kExitConfig;
  }
  Store store;
  if (!opt.address.empty()) {
    std::cerr << "pdstore: serve runs an in-process store; drop --address\n";
    return kExitConfig;
  }
  if (pds_status st = store.open(opt, config); st != PDS_OK) return report_failure("open", st);

  // Block the stop signals here so the watcher thread receives them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  pds_server* server = nullptr;
  if (pds_status st = pds_server_start(store.get(), host.c_str(), port, &server); st != PDS_OK) {
    return report_failure("serve", st);
  }
  std::cout << "listening on " << host << ":" << pds_server_port(server) << std::endl;
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    pds_server_stop(server);
  });
  pds_server_wait(server);
  // Unblock the watcher if the server stopped on its own.
  kill(getpid(), SIGTERM);
  watcher.join();
  pds_server_free(server);
  return kExitOk;
}

int cmd_reap(const Options& opt, const std::string& config) {
  Store store;
  if (pds_status st = store.open(opt, config); st != PDS_OK) return report_failure("open", st);
  uint64_t erased = 0;
  if (pds_status st = pds_store_reap(store.get(), &erased); st != PDS_OK) {
    return report_failure("reap", st);
  }
  std::cout << "erased " << erased << " expired records\n";
  return kExitOk;
}

int cmd_features(const Options& opt, const std::string& config) {
  Store store;
  if (pds_status st = store.open(opt, config); st != PDS_OK) return report_failure("open", st);
  char* text = nullptr;
  if (pds_status st = pds_store_features(store.get(), &text); st != PDS_OK) {
    return report_failure("features", st);
  }
  std::cout << take(text);
  return kExitOk;
}

// Summarizes a saved report; exit 1 if it records a failed run.
int cmd_report(const Options& opt, const std::string& config) {
  std::string text;
  if (opt.input.empty() || !read_file(opt.input, &text)) {
    std::cerr << "pdstore: report needs a readable --input file\n";
    return kExitConfig;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "pdstore: " << opt.input << ": " << e.what() << "\n";
    return kExitConfig;
  }
  double threshold = 100.0;
  for (std::istringstream lines(config); std::getline(lines, text);) {
    if (text.rfind("min_correctness=", 0) == 0) threshold = std::stod(text.substr(16));
  }
  try {
    const auto& m = doc.at("metrics");
    double correctness = m.at("correctness_pct").get<double>();
    std::printf("driver %s, seed %s, validation %s\n",
                doc.at("config").at("driver").get<std::string>().c_str(),
                doc.at("config").at("seed").dump().c_str(),
                doc.at("config").at("validation").get<std::string>().c_str());
    std::printf("correctness %.3f%% (%s of %s validated)\n", correctness,
                m.at("matched").dump().c_str(), m.at("validated").dump().c_str());
    std::printf("space factor %.3f\n", m.at("space_factor").get<double>());
    std::map<std::string, double> completion;
    if (doc.contains("timing")) {
      for (const auto& w : doc["timing"].at("workloads")) {
        completion[w.at("name").get<std::string>()] = w.at("completion_time_ms").get<double>();
      }
    }
    std::printf("%-12s %10s %10s %8s %8s", "workload", "attempted", "succeeded", "denied",
                "errored");
    std::printf(completion.empty() ? "\n" : " %14s\n", "completion_ms");
    for (const auto& w : m.at("workloads")) {
      std::string name = w.at("name").get<std::string>();
      std::printf("%-12s %10s %10s %8s %8s", name.c_str(), w.at("attempted").dump().c_str(),
                  w.at("succeeded").dump().c_str(), w.at("denied").dump().c_str(),
                  w.at("errored").dump().c_str());
      if (completion.count(name) > 0) {
        std::printf(" %14.3f\n", completion[name]);
      } else {
        std::printf("\n");
      }
    }
    bool aborted = doc.at("aborted").get<bool>();
    if (aborted) std::printf("aborted: %s\n", doc.value("abort_reason", "").c_str());
    return !aborted && correctness >= threshold ? kExitOk : kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "pdstore: " << opt.input << " is not a pdstore report: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdstore: personal-data store and compliance benchmark"};
  app.require_subcommand(1, 1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-P,--properties", opt.properties_file, "property file (key=value lines)");
    cmd->add_option("-p", opt.overrides, "override one property, key=value (repeatable)");
    cmd->add_option("-s,--seed", opt.seed, "seed override");
  };
  auto add_address = [&](CLI::App* cmd) {
    cmd->add_option("-a,--address", opt.address, "use a pdstore server at host:port");
  };

  CLI::App* load = app.add_subcommand("load", "insert the configured load");
  add_common(load);
  add_address(load);
  CLI::App* run = app.add_subcommand("run", "load and run workloads, emit a report");
  add_common(run);
  add_address(run);
  run->add_option("-o,--report", opt.report_path, "report path (default: stdout)");
  run->add_option("--latencies", opt.latency_path, "per-operation latency CSV path");
  CLI::App* serve = app.add_subcommand("serve", "serve an in-process store over TCP");
  add_common(serve);
  add_address(serve);
  serve->add_option("-l,--listen", opt.listen, "listen address host:port")
      ->capture_default_str();
  CLI::App* reap = app.add_subcommand("reap", "run one reaper pass");
  add_common(reap);
  add_address(reap);
  CLI::App* features = app.add_subcommand("features", "print the capability report");
  add_common(features);
  add_address(features);
  CLI::App* report = app.add_subcommand("report", "summarize a saved report");
  add_common(report);
  report->add_option("-i,--input", opt.input, "report JSON file")->required();

  if (argc > 1 && argv[1][0] != '-') {
    std::string verb = argv[1];
    bool known = false;
    for (const CLI::App* sub : app.get_subcommands({})) known = known || sub->get_name() == verb;
    if (!known) {
      std::cerr << "pdstore: unknown verb '" << verb << "'\n\n" << app.help();
      return kExitConfig;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "pdstore: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  std::string config;
  if (!config_text(opt, &config)) return kExitConfig;
  if (load->parsed()) return cmd_load(opt, config);
  if (run->parsed()) return cmd_run(opt, config);
  if (serve->parsed()) return cmd_serve(opt, config);
  if (reap->parsed()) return cmd_reap(opt, config);
  if (features->parsed()) return cmd_features(opt, config);
  return cmd_report(opt, config);
}
