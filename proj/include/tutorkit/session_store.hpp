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
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tutorkit/curriculum.hpp"
#include "tutorkit/dialogue.hpp"
#include "tutorkit/session.hpp"

namespace tutorkit::session {

// Owns every open and finished session, their event logs and the per-student
// snapshots. Thread safe; each session admits one advance at a time.
class SessionStore {
 public:
  struct Options {
    std::optional<std::string> dataDir;  // persistence root; memory only when unset
    SessionConfig config;
    std::function<std::int64_t()> clock;  // ms; wall clock when unset
    // Runs while a session's step lock is held. Test hook.
    std::function<void(const std::string& sessionId)> inFlightHook;
  };

  struct Outcome {
    SessionState state;
    std::vector<dialogue::TutorTurn> turns;
    nlohmann::json taskResult;
  };

  SessionStore(const curriculum::Curriculum& curriculum, const dialogue::Resources& resources,
               Options options);
  ~SessionStore();

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  // Throws UnknownTopic, SessionAlreadyOpen.
  Outcome start(const std::string& studentId, const std::string& topicId,
                std::optional<std::uint64_t> seed = std::nullopt);
  // Throws UnknownSession, Conflict, and whatever advance throws. The event's
  // timestamp is taken from the store clock.
  Outcome advance(const std::string& sessionId, StudentEvent event);

  SessionState get(const std::string& sessionId) const;
  std::vector<SessionEvent> events(const std::string& sessionId) const;
  std::vector<std::string> sessionIds() const;
  StudentModel studentModel(const std::string& studentId, const std::string& topicId) const;
  const curriculum::Topic& topicOf(const std::string& sessionId) const;
  const curriculum::Curriculum& curriculum() const { return curriculum_; }
  const dialogue::Resources& resources() const { return resources_; }
  std::int64_t now() const;

  // Replays every log under the data directory; returns the session count.
  std::size_t recover();

  // File name used for a student's snapshot.
  static std::string safeFileStem(const std::string& id);

 private:
  struct Entry;

  Entry& entry(const std::string& sessionId) const;
  void persist(const Entry& e, const std::vector<SessionEvent>& fresh);
  void saveSnapshot(const std::string& studentId);

  const curriculum::Curriculum& curriculum_;
  const dialogue::Resources& resources_;
  Options options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::unique_ptr<Entry>> sessions_;
  std::map<std::string, std::map<std::string, StudentModel>> snapshots_;
  std::uint64_t counter_ = 0;
};

}  // namespace tutorkit::session
