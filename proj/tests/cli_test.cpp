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


// Drives the pdstore binary as a subprocess and checks its exit codes.

#include <gtest/gtest.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "net.hpp"
#include "pds/server.hpp"
#include "pds/wire.hpp"
#include "test_util.hpp"

namespace pds {
namespace {

using pds::testing::TempDir;

int run_cli(const std::string& args, std::string* out = nullptr) {
  std::string cmd = std::string(PDSTORE_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return -1;
  std::string text;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) text.append(buf, n);
  int status = pclose(pipe);
  if (out != nullptr) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Answers the line protocol from a real service but swaps the data field of
// every record returned by READ-DATA queries.
class TamperingServer {
 public:
  TamperingServer() {
    ServiceConfig config;
    config.store.clock_mode = ClockMode::kLogical;
    config.store.background_reaper = false;
    service_ = std::make_shared<GdprService>(config);
    backend_ = std::make_unique<WireServer>(service_, "127.0.0.1", 0);
    std::string error;
    fd_ = net::listen_tcp("127.0.0.1", 0, &port_, &error);
    if (fd_ < 0) throw std::runtime_error(error);
    acceptor_ = std::thread([this] { accept_loop(); });
  }
  ~TamperingServer() {
    stopping_ = true;
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    acceptor_.join();
    for (auto& t : sessions_) t.join();
  }
  uint16_t port() const { return port_; }

 private:
  void accept_loop() {
    while (!stopping_) {
      int client = ::accept(fd_, nullptr, nullptr);
      if (client < 0) return;
      sessions_.emplace_back([this, client] { serve(client); });
    }
  }

  void serve(int fd) {
    LineChannel channel(fd);
    bool hello = false;
    bool quit = false;
    std::string line;
    while (!quit && channel.read_line(&line)) {
      std::vector<std::string> out = backend_->handle_line(line, &hello, &quit);
      bool tamper = line.rfind("REQ ", 0) == 0 && line.find(" READ-DATA-") != std::string::npos;
      std::string bytes;
      for (std::size_t i = 0; i < out.size(); ++i) {
        std::string l = out[i];
        if (tamper && i > 0) {
          std::size_t a = l.find(';');
          std::size_t b = l.find(';', a + 1);
          l = l.substr(0, a + 1) + "tampered" + l.substr(b);
        }
        bytes.append(l).push_back('\n');
      }
      try {
        channel.write_all(bytes);
      } catch (const Error&) {
        break;
      }
    }
    ::close(fd);
  }

  std::shared_ptr<GdprService> service_;
  std::unique_ptr<WireServer> backend_;
  int fd_ = -1;
  uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::vector<std::thread> sessions_;
};

TEST(CliTest, UnknownOrMissingVerbExitsTwo) {
  std::string out;
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("run --no-such-flag"), 2);
  EXPECT_EQ(run_cli("run -p notanassignment"), 2);
  EXPECT_EQ(run_cli("run -P /nonexistent/file.properties"), 2);
  EXPECT_EQ(run_cli("--help", &out), 0);
  EXPECT_NE(out.find("serve"), std::string::npos);
}

TEST(CliTest, CustomerRunSucceedsAndWritesReport) {
  TempDir dir("cli");
  std::filesystem::path report = dir.path() / "report.json";
  std::filesystem::path csv = dir.path() / "lat.csv";
  int code = run_cli("run -p workload=customer -p operationcount=10000 -o " + report.string() +
                     " --latencies " + csv.string());
  ASSERT_EQ(code, 0);
  auto doc = nlohmann::json::parse(slurp(report));
  EXPECT_EQ(doc["metrics"]["correctness_pct"].get<double>(), 100.0);
  EXPECT_EQ(doc["metrics"]["workloads"][0]["name"], "customer");
  const auto& workload = doc["metrics"]["workloads"][0];
  uint64_t templated = 0;
  for (const auto& [name, n] : workload["templates"].items()) templated += n.get<uint64_t>();
  EXPECT_EQ(templated, 10000u);
  uint64_t attempted = workload["attempted"].get<uint64_t>();
  EXPECT_EQ(attempted, 10000u + workload["regenerated"].get<uint64_t>());
  EXPECT_TRUE(doc.contains("timing"));
  std::string lines = slurp(csv);
  EXPECT_EQ(static_cast<uint64_t>(std::count(lines.begin(), lines.end(), '\n')), attempted + 1);

  std::string summary;
  EXPECT_EQ(run_cli("report -i " + report.string(), &summary), 0);
  EXPECT_NE(summary.find("customer"), std::string::npos);
}

TEST(CliTest, OverridesWinOverPropertyFile) {
  TempDir dir("cli");
  std::filesystem::path props = dir.path() / "run.properties";
  std::ofstream(props) << "# test run\nworkload=regulator\noperationcount=50\nrecordcount=2000\n"
                          "report.timing=false\n";
  std::string a;
  std::string b;
  ASSERT_EQ(run_cli("run -P " + props.string() + " -p operationcount=70 --seed 9", &a), 0);
  auto doc = nlohmann::json::parse(a);
  EXPECT_EQ(doc["metrics"]["workloads"][0]["attempted"].get<uint64_t>(), 70u);
  EXPECT_EQ(doc["config"]["seed"].get<uint64_t>(), 9u);
  EXPECT_FALSE(doc.contains("timing"));
  ASSERT_EQ(run_cli("run -P " + props.string() + " -p operationcount=70 --seed 9", &b), 0);
  EXPECT_EQ(a, b);
}

TEST(CliTest, TamperedReadsFailValidation) {
  TamperingServer server;
  std::string address = "127.0.0.1:" + std::to_string(server.port());
  EXPECT_EQ(run_cli("run -a " + address +
                    " -p workload=customer -p operationcount=2000 -p recordcount=3000"),
            1);
}

TEST(CliTest, UnreachableServerExitsTwo) {
  uint16_t port = 0;
  std::string error;
  int fd = net::listen_tcp("127.0.0.1", 0, &port, &error);
  ASSERT_GE(fd, 0);
  ::close(fd);
  EXPECT_EQ(run_cli("run -a 127.0.0.1:" + std::to_string(port)), 2);
}

TEST(CliTest, ServeThenRemoteRun) {
  int pipe_fds[2];
  ASSERT_EQ(pipe(pipe_fds), 0);
  pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    dup2(pipe_fds[1], STDOUT_FILENO);
    close(pipe_fds[0]);
    execl(PDSTORE_BIN, PDSTORE_BIN, "serve", "-l", "127.0.0.1:0", "-p", "store.clock=logical",
          static_cast<char*>(nullptr));
    _exit(127);
  }
  close(pipe_fds[1]);
  std::string banner;
  char c;
  while (read(pipe_fds[0], &c, 1) == 1 && c != '\n') banner.push_back(c);
  close(pipe_fds[0]);
  std::string port = banner.substr(banner.rfind(':') + 1);
  ASSERT_FALSE(port.empty()) << banner;

  std::string report;
  int code = run_cli("run -a 127.0.0.1:" + port +
                         " -p recordcount=3000 -p operationcount=500 -p report.timing=false",
                     &report);
  kill(pid, SIGTERM);
  int status = 0;
  waitpid(pid, &status, 0);
  EXPECT_EQ(code, 0);
  auto doc = nlohmann::json::parse(report);
  EXPECT_EQ(doc["config"]["driver"], "remote");
  EXPECT_EQ(doc["metrics"]["correctness_pct"].get<double>(), 100.0);
  EXPECT_TRUE(WIFEXITED(status) && WEXITSTATUS(status) == 0);
}

TEST(CliTest, FeaturesAndLoadAgainstPersistentStore) {
  TempDir dir("cli");
  std::string store = "-p store.clock=wall -p store.persistence=log -p store.data_dir=" +
                      dir.path().string();
  std::string out;
  ASSERT_EQ(run_cli("load " + store + " -p recordcount=300 -p ttl_short_s=1", &out), 0);
  EXPECT_EQ(out, "loaded 300 records\n");
  EXPECT_EQ(run_cli("load " + store + " -p recordcount=300", &out), 2);
  ::sleep(2);
  ASSERT_EQ(run_cli("reap " + store, &out), 0);
  EXPECT_EQ(out, "erased 60 expired records\n");
  ASSERT_EQ(run_cli("features " + store, &out), 0);
  EXPECT_NE(out.find("ENCRYPTION=NONE"), std::string::npos);
  EXPECT_EQ(run_cli("features -p store.encryption=true"), 2);
}

TEST(CliTest, ReportVerbRejectsGarbage) {
  TempDir dir("cli");
  std::filesystem::path bad = dir.path() / "bad.json";
  std::ofstream(bad) << "{not json";
  EXPECT_EQ(run_cli("report -i " + bad.string()), 2);
  EXPECT_EQ(run_cli("report -i " + (dir.path() / "missing.json").string()), 2);
}

}  // namespace
}  // namespace pds
