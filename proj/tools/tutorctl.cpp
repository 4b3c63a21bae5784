// Copyright 2026 The tutorkit Authors.
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
// tutorctl: operator CLI over the tutorkit C API.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <pthread.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "tutorkit/tutorkit.h"

namespace {

int fail(tk_status s) {
  std::cerr << "tutorctl: " << tk_status_name(s) << ": " << tk_last_error() << "\n";
  return 1;
}

// Writes to path, or stdout for "-".
bool emit(const std::string& path, const char* text) {
  if (path == "-") {
    std::cout << text << "\n";
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text << "\n";
  if (!out) {
    std::cerr << "tutorctl: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int serve(const std::string& curriculum, int port, const std::string& data, const std::string& host,
          const std::string& token, const std::string& staticDir) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!curriculum.empty()) cfg["curriculum"] = curriculum;
  if (!data.empty()) cfg["data"] = data;
  if (!token.empty()) cfg["token"] = token;
  tk_engine* engine = nullptr;
  if (tk_status s = tk_engine_open(cfg.dump().c_str(), &engine); s != TK_OK) return fail(s);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  tk_server* server = nullptr;
  if (tk_status s = tk_server_start(engine, host.c_str(), port, staticDir.empty() ? nullptr : staticDir.c_str(),
                                    &server);
      s != TK_OK) {
    tk_engine_close(engine);
    return fail(s);
  }
  std::cout << "listening on http://" << host << ":" << tk_server_port(server) << "/v1" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  tk_server_stop(server);
  tk_engine_close(engine);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tutorkit operator tool"};
  app.set_version_flag("--version", std::string(tk_version()));
  app.require_subcommand(1);

  std::string curriculum, data, host = "127.0.0.1", token, staticDir;
  int port = 8080;
  auto* serveCmd = app.add_subcommand("serve", "Run the HTTP API");
  serveCmd->add_option("--curriculum", curriculum, "Curriculum directory")->check(CLI::ExistingDirectory);
  serveCmd->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serveCmd->add_option("--data", data, "Directory for logs, snapshots and test records");
  serveCmd->add_option("--host", host, "Bind address");
  serveCmd->add_option("--token", token, "Require this X-Api-Token on API calls");
  serveCmd->add_option("--static", staticDir, "Directory served under /")->check(CLI::ExistingDirectory);

  std::string policy = "perfect", topic, report = "-";
  std::uint64_t seed = 1;
  auto* simCmd = app.add_subcommand("simulate", "Run one simulated-student episode");
  simCmd->add_option("--policy", policy, "perfect | ignorant | noisy:P | summaryonly:K");
  simCmd->add_option("--seed", seed, "Episode seed");
  simCmd->add_option("--topic", topic, "Topic id")->required();
  simCmd->add_option("--curriculum", curriculum, "Curriculum directory")->check(CLI::ExistingDirectory);
  simCmd->add_option("--report", report, "Episode report path ('-' for stdout)");

  std::string records, mode = "probit";
  auto* anCmd = app.add_subcommand("analyze", "Analyse an item-response CSV");
  anCmd->add_option("--records", records, "Records CSV")->required()->check(CLI::ExistingFile);
  anCmd->add_option("--report", report, "Report path ('-' for stdout)");
  anCmd->add_option("--or-mode", mode, "Odds ratio to d conversion")->check(CLI::IsMember({"probit", "logistic"}));

  std::string itembank;
  auto* valCmd = app.add_subcommand("validate", "Check a curriculum directory and item bank");
  valCmd->add_option("--curriculum", curriculum, "Curriculum directory")->check(CLI::ExistingDirectory);
  valCmd->add_option("--itembank", itembank, "Item bank JSONL")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  const char* cur = curriculum.empty() ? nullptr : curriculum.c_str();
  char* out = nullptr;
  tk_status s = TK_OK;
  if (*serveCmd) return serve(curriculum, port, data, host, token, staticDir);
  if (*simCmd) {
    s = tk_simulate(cur, topic.c_str(), policy.c_str(), seed, &out);
  } else if (*anCmd) {
    s = tk_analyze(records.c_str(), mode == "probit" ? TK_OR_PROBIT : TK_OR_LOGISTIC, &out);
  } else if (*valCmd) {
    s = tk_validate(cur, itembank.empty() ? nullptr : itembank.c_str(), &out);
    report = "-";
  }
  if (s != TK_OK) return fail(s);
  const bool ok = emit(report, out);
  tk_string_free(out);
  return ok ? 0 : 1;
}
