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
#include "tutorkit/session_store.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tutorkit/error.hpp"
#include "tutorkit/rng.hpp"

namespace tutorkit::session {

namespace fs = std::filesystem;
using nlohmann::json;

struct SessionStore::Entry {
  std::mutex busy;
  SessionState state;
  std::vector<SessionEvent> log;
  const curriculum::Topic* topic = nullptr;
};

SessionStore::SessionStore(const curriculum::Curriculum& curriculum,
                           const dialogue::Resources& resources, Options options)
    : curriculum_(curriculum), resources_(resources), options_(std::move(options)) {
  if (options_.dataDir) {
    std::error_code ec;
    fs::create_directories(fs::path(*options_.dataDir) / "sessions", ec);
    fs::create_directories(fs::path(*options_.dataDir) / "students", ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create data directory " + *options_.dataDir);
  }
}

SessionStore::~SessionStore() = default;

std::int64_t SessionStore::now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string SessionStore::safeFileStem(const std::string& id) {
  bool plain = !id.empty() && id.size() <= 64;
  for (char c : id)
    plain = plain && (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_');
  if (plain) return id;
  char buf[20];
  std::snprintf(buf, sizeof buf, "x%016llx", static_cast<unsigned long long>(fnv1a(id)));
  return buf;
}

SessionStore::Entry& SessionStore::entry(const std::string& sessionId) const {
  auto it = sessions_.find(sessionId);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session " + sessionId, sessionId);
  return *it->second;
}

void SessionStore::persist(const Entry& e, const std::vector<SessionEvent>& fresh) {
  if (!options_.dataDir) return;
  fs::path path = fs::path(*options_.dataDir) / "sessions" / (e.state.sessionId + ".jsonl");
  std::ofstream out(path, std::ios::app | std::ios::binary);
  for (const auto& ev : fresh) out << eventToJson(ev).dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "cannot append to " + path.string());
}

void SessionStore::saveSnapshot(const std::string& studentId) {
  if (!options_.dataDir) return;
  json topics = json::object();
  for (const auto& [topicId, model] : snapshots_[studentId]) topics[topicId] = studentModelToJson(model);
  fs::path path = fs::path(*options_.dataDir) / "students" / (safeFileStem(studentId) + ".json");
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    out << json{{"studentId", studentId}, {"topics", topics}}.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot replace " + path.string());
}

SessionStore::Outcome SessionStore::start(const std::string& studentId, const std::string& topicId,
                                          std::optional<std::uint64_t> seed) {
  if (studentId.empty()) throw Error(ErrorCode::InvalidArgument, "studentId is empty", "studentId");
  const curriculum::Topic& topic = curriculum_.topic(topicId);
  std::lock_guard lock(mutex_);
  for (const auto& [id, e] : sessions_) {
    std::unique_lock busy(e->busy, std::try_to_lock);
    const SessionState& s = e->state;
    if (s.studentId == studentId && s.topicId == topicId && (!busy.owns_lock() || !s.complete()))
      throw Error(ErrorCode::SessionAlreadyOpen,
                  "student " + studentId + " already has an open session on " + topicId, id);
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(++counter_));
  const std::string sessionId = buf;
  const std::uint64_t useSeed =
      seed ? *seed : mixSeed(fnv1a(sessionId + "/" + studentId + "/" + topicId), 0);

  StudentModel prior;
  prior.studentId = studentId;
  if (auto s = snapshots_.find(studentId); s != snapshots_.end())
    if (auto t = s->second.find(topicId); t != s->second.end()) prior = t->second;

  StepResult r = startSession(topic, resources_, sessionId, studentId, prior, useSeed, options_.config, now());
  auto e = std::make_unique<Entry>();
  e->topic = &topic;
  e->log = r.events;
  e->state = r.state;
  persist(*e, r.events);
  snapshots_[studentId][topicId] = r.state.model;
  saveSnapshot(studentId);
  sessions_[sessionId] = std::move(e);
  return Outcome{std::move(r.state), std::move(r.turns), nullptr};
}

SessionStore::Outcome SessionStore::advance(const std::string& sessionId, StudentEvent event) {
  Entry* e;
  {
    std::lock_guard lock(mutex_);
    e = &entry(sessionId);
  }
  std::unique_lock busy(e->busy, std::try_to_lock);
  if (!busy.owns_lock())
    throw Error(ErrorCode::Conflict, "another turn is in flight for " + sessionId, sessionId);
  if (options_.inFlightHook) options_.inFlightHook(sessionId);
  event.timestamp = now();
  StepResult r = session::advance(*e->topic, resources_, e->state, event);
  {
    std::lock_guard lock(mutex_);
    persist(*e, r.events);
    e->log.insert(e->log.end(), r.events.begin(), r.events.end());
    e->state = r.state;
    snapshots_[r.state.studentId][r.state.topicId] = r.state.model;
    saveSnapshot(r.state.studentId);
  }
  return Outcome{std::move(r.state), std::move(r.turns), std::move(r.taskResult)};
}

SessionState SessionStore::get(const std::string& sessionId) const {
  std::lock_guard lock(mutex_);
  Entry& e = entry(sessionId);
  std::unique_lock busy(e.busy, std::try_to_lock);
  if (!busy.owns_lock())
    throw Error(ErrorCode::Conflict, "a turn is in flight for " + sessionId, sessionId);
  return e.state;
}

std::vector<SessionEvent> SessionStore::events(const std::string& sessionId) const {
  std::lock_guard lock(mutex_);
  return entry(sessionId).log;
}

std::vector<std::string> SessionStore::sessionIds() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

StudentModel SessionStore::studentModel(const std::string& studentId, const std::string& topicId) const {
  std::lock_guard lock(mutex_);
  StudentModel m;
  m.studentId = studentId;
  if (auto s = snapshots_.find(studentId); s != snapshots_.end())
    if (auto t = s->second.find(topicId); t != s->second.end()) m = t->second;
  return m;
}

const curriculum::Topic& SessionStore::topicOf(const std::string& sessionId) const {
  std::lock_guard lock(mutex_);
  return *entry(sessionId).topic;
}

std::size_t SessionStore::recover() {
  if (!options_.dataDir) return 0;
  std::lock_guard lock(mutex_);
  const fs::path root(*options_.dataDir);

  for (const auto& f : fs::directory_iterator(root / "students")) {
    if (f.path().extension() != ".json") continue;
    json doc = json::parse(readTextFile(f.path().string()));
    const std::string studentId = doc.at("studentId").get<std::string>();
    for (const auto& [topicId, model] : doc.at("topics").items())
      snapshots_[studentId][topicId] = studentModelFromJson(model);
  }

  std::vector<fs::path> logs;
  for (const auto& f : fs::directory_iterator(root / "sessions"))
    if (f.path().extension() == ".jsonl") logs.push_back(f.path());
  std::sort(logs.begin(), logs.end());
  std::size_t count = 0;
  for (const auto& path : logs) {
    std::ifstream in(path, std::ios::binary);
    std::vector<SessionEvent> log;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) log.push_back(eventFromJson(json::parse(line)));
    if (log.empty()) continue;
    const std::string topicId = log.front().payload.at("topicId").get<std::string>();
    auto e = std::make_unique<Entry>();
    e->topic = &curriculum_.topic(topicId);
    e->state = replay(*e->topic, resources_, log);
    if (e->state.nextSeq != log.size())
      throw Error(ErrorCode::IoFailure, "replay of " + path.string() + " diverged from its log");
    e->log = std::move(log);
    const std::string id = e->state.sessionId;
    if (id.size() > 1 && id[0] == 's')
      counter_ = std::max<std::uint64_t>(counter_, std::strtoull(id.c_str() + 1, nullptr, 10));
    sessions_[id] = std::move(e);
    ++count;
  }
  return count;
}

}  // namespace tutorkit::session
