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
#include "tutorkit/tutorkit.h"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <thread>

#include "json.hpp"
#include "tutorkit/analytics.hpp"
#include "tutorkit/curriculum.hpp"
#include "tutorkit/error.hpp"
#include "tutorkit/http_server.hpp"
#include "tutorkit/resources.hpp"
#include "tutorkit/service.hpp"
#include "tutorkit/simstudent.hpp"
#include "tutorkit/testbank.hpp"
#include "tutorkit/version.hpp"

using nlohmann::json;
using namespace tutorkit;

struct tk_engine {
  std::unique_ptr<service::Service> service;
};

struct tk_server {
  std::unique_ptr<service::HttpServer> http;
  std::thread thread;
};

namespace {

thread_local std::string lastError;

tk_status statusOf(ErrorCode code) { return static_cast<tk_status>(static_cast<int>(code) + 1); }

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
tk_status guarded(F&& f) {
  try {
    f();
    lastError.clear();
    return TK_OK;
  } catch (const Error& e) {
    lastError = e.what();
    return statusOf(e.code());
  } catch (const json::exception& e) {
    lastError = e.what();
    return TK_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    lastError = e.what();
    return TK_INTERNAL;
  } catch (...) {
    lastError = "unknown exception";
    return TK_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must not be null", name);
}

std::string defaultCurriculum() { return resourcePath("curriculum"); }

analytics::OrToDMode orMode(tk_or_mode m) {
  if (m == TK_OR_PROBIT) return analytics::OrToDMode::Probit;
  if (m == TK_OR_LOGISTIC) return analytics::OrToDMode::Logistic;
  throw Error(ErrorCode::InvalidArgument, "unknown OR conversion mode", "mode");
}

}  // namespace

extern "C" {

const char* tk_version(void) { return kVersion; }

const char* tk_status_name(tk_status status) {
  static const char* const names[] = {
      "Ok",           "MissingFile",      "SchemaViolation",      "DanglingReference",
      "EmptyKeywordList", "EmptyExpectation", "EmptyCandidates",  "OutOfRange",
      "ScriptExhausted", "EmptyAgenda",   "NoTriples",            "UnknownSlot",
      "SlotAlreadyFilled", "NoSpans",     "UnknownBlank",         "UnknownTopic",
      "UnknownSession", "SessionAlreadyOpen", "IllegalEventForPhase", "SessionComplete",
      "IllegalSource", "Conflict",         "InsufficientItems",    "UnknownItem",
      "UnknownTest",  "NonPositiveOR",     "SingularDesign",       "Separation",
      "IoFailure",    "InvalidArgument",   "Unauthorized",         "Internal"};
  const int i = static_cast<int>(status);
  if (i < 0 || i >= static_cast<int>(sizeof names / sizeof names[0])) return "Unknown";
  return names[i];
}

const char* tk_last_error(void) { return lastError.c_str(); }

void tk_string_free(char* s) { std::free(s); }

tk_status tk_engine_open(const char* config_json, tk_engine** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    json cfg = config_json && *config_json ? json::parse(config_json) : json::object();
    if (!cfg.is_object()) throw Error(ErrorCode::InvalidArgument, "engine config must be an object");
    service::ServiceOptions opts;
    if (cfg.contains("data")) opts.store.dataDir = cfg.at("data").get<std::string>();
    if (cfg.contains("token")) opts.apiToken = cfg.at("token").get<std::string>();
    if (cfg.contains("session")) opts.store.config = session::configFromJson(cfg.at("session"));
    if (cfg.value("logicalClock", false)) {
      auto tick = std::make_shared<std::atomic<std::int64_t>>(0);
      opts.store.clock = [tick] { return tick->fetch_add(1000) + 1000; };
    }
    auto cur = curriculum::loadCurriculum(cfg.value("curriculum", defaultCurriculum()));
    auto bank = cfg.contains("itembank") ? testbank::ItemBank::fromFile(cfg.at("itembank").get<std::string>())
                                         : testbank::ItemBank::bundled();
    auto engine = std::make_unique<tk_engine>();
    engine->service = std::make_unique<service::Service>(std::move(cur), dialogue::Resources::bundled(),
                                                         std::move(bank), std::move(opts));
    *out = engine.release();
  });
}

void tk_engine_close(tk_engine* engine) { delete engine; }

tk_status tk_engine_request(tk_engine* engine, const char* method, const char* path, const char* body,
                            const char* headers_json, int* http_status, char** response_body) {
  return guarded([&] {
    require(engine, "engine");
    require(method, "method");
    require(path, "path");
    require(http_status, "http_status");
    require(response_body, "response_body");
    service::ApiRequest req{method, path, body ? body : "", {}};
    if (headers_json && *headers_json) {
      for (const auto& [k, v] : json::parse(headers_json).items()) req.headers[k] = v.get<std::string>();
    }
    service::ApiResponse resp = engine->service->handle(req);
    *http_status = resp.status;
    *response_body = dup(resp.body);
  });
}

tk_status tk_server_start(tk_engine* engine, const char* host, int port, const char* static_dir,
                          tk_server** out) {
  return guarded([&] {
    require(engine, "engine");
    require(out, "out");
    *out = nullptr;
    if (port < 0 || port > 65535) throw Error(ErrorCode::OutOfRange, "port out of range", "port");
    service::HttpOptions opts;
    if (host && *host) opts.host = host;
    opts.port = port;
    if (static_dir && *static_dir) opts.staticDir = static_dir;
    auto server = std::make_unique<tk_server>();
    server->http = std::make_unique<service::HttpServer>(*engine->service, opts);
    server->http->bind();
    server->thread = std::thread([s = server->http.get()] { s->listen(); });
    *out = server.release();
  });
}

int tk_server_port(const tk_server* server) { return server ? server->http->port() : 0; }

void tk_server_wait(tk_server* server) {
  if (server && server->thread.joinable()) server->thread.join();
}

void tk_server_stop(tk_server* server) {
  if (!server) return;
  server->http->stop();
  if (server->thread.joinable()) server->thread.join();
  delete server;
}

tk_status tk_simulate(const char* curriculum_dir, const char* topic_id, const char* policy, uint64_t seed,
                      char** report_json) {
  return guarded([&] {
    require(topic_id, "topic_id");
    require(policy, "policy");
    require(report_json, "report_json");
    auto report = simstudent::runEpisode(curriculum_dir ? curriculum_dir : defaultCurriculum(), topic_id,
                                         simstudent::Policy::parse(policy), seed);
    *report_json = dup(simstudent::reportToJson(report).dump(2));
  });
}

tk_status tk_analyze(const char* records_csv_path, tk_or_mode mode, char** report_json) {
  return guarded([&] {
    require(records_csv_path, "records_csv_path");
    require(report_json, "report_json");
    auto m = orMode(mode);
    *report_json = dup(analytics::analysisReport(analytics::importRecords(records_csv_path), m).dump(2));
  });
}

tk_status tk_or_to_d(double odds_ratio, tk_or_mode mode, double* d) {
  return guarded([&] {
    require(d, "d");
    *d = analytics::orToD(odds_ratio, orMode(mode));
  });
}

tk_status tk_validate(const char* curriculum_dir, const char* itembank_path, char** report_json) {
  return guarded([&] {
    require(report_json, "report_json");
    auto cur = curriculum::loadCurriculum(curriculum_dir ? curriculum_dir : defaultCurriculum());
    json topics = json::array();
    for (const auto& t : cur.topics)
      topics.push_back({{"id", t.id}, {"concepts", t.concepts.size()}, {"lectureSteps", t.lectureScript.size()}, {"media", t.mediaAssets.size()}});
    json standards = json::array();
    for (const auto& s : cur.standards) standards.push_back(s.id);
    json report{{"ok", true}, {"topics", topics}, {"standards", standards}};
    auto bank = itembank_path ? testbank::ItemBank::fromFile(itembank_path) : testbank::ItemBank::bundled();
    report["itemBank"] = {{"topics", bank.topics()}, {"warnings", bank.lint()}};
    *report_json = dup(report.dump(2));
  });
}

}  // extern "C"
