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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tutorkit/curriculum.hpp"
#include "tutorkit/dialogue.hpp"
#include "tutorkit/phase.hpp"
#include "tutorkit/retrieval.hpp"
#include "tutorkit/student_model.hpp"
#include "tutorkit/tasks.hpp"

namespace tutorkit::session {

enum class BasisSource { Both, Student, Tutor };

std::string_view basisSourceName(BasisSource s);
std::optional<BasisSource> basisSourceFromName(std::string_view name);

struct SessionConfig {
  dialogue::ScaffoldThresholds thresholds;
  BasisSource basisSource = BasisSource::Both;
  // Carry presumed-covered and mastered concepts into later sessions.
  bool persistPresumed = true;
  // Advisory session length; past it the view carries a wrap-up flag.
  std::int64_t softLimitMs = 35LL * 60 * 1000;

  bool operator==(const SessionConfig&) const = default;
};

nlohmann::json configToJson(const SessionConfig& c);
SessionConfig configFromJson(const nlohmann::json& j);

enum class EventKind { StudentUtterance, TutorTurn, TaskSubmission, PhaseChange, AssessmentRecord };

std::string_view eventKindName(EventKind k);
std::optional<EventKind> eventKindFromName(std::string_view name);

struct SessionEvent {
  std::uint64_t seq = 0;
  std::int64_t timestamp = 0;
  EventKind kind = EventKind::PhaseChange;
  nlohmann::json payload;

  bool operator==(const SessionEvent&) const = default;
};

nlohmann::json eventToJson(const SessionEvent& e);
SessionEvent eventFromJson(const nlohmann::json& j);

// What the student does: say something, or submit a task form.
struct StudentEvent {
  enum class Kind { Text, Task };
  Kind kind = Kind::Text;
  std::string text;
  // Concept maps: {slotId, answer} grades one slot, {} or {skip:true} leaves
  // the current map. Cloze: {blankId, answer} stores one response;
  // {answers:{...}}, {finish:true} or {} grades the passage and ends it.
  nlohmann::json task = nlohmann::json::object();
  std::int64_t timestamp = 0;

  static StudentEvent say(std::string text, std::int64_t timestamp = 0);
  static StudentEvent submit(nlohmann::json task, std::int64_t timestamp = 0);
};

struct CycleRecord {
  int round = 1;
  std::string conceptId;
  std::vector<std::string> moves;

  bool operator==(const CycleRecord&) const = default;
};

struct SessionState {
  std::string sessionId;
  std::string studentId;
  std::string topicId;
  std::uint64_t seed = 0;
  SessionConfig config;

  Phase phase = Phase::Lecture;
  int rounds = 0;  // decided when the summary is graded
  std::optional<double> summaryRatio;
  std::vector<std::string> initialAgenda;
  std::vector<std::string> agenda;

  dialogue::LectureState lecture;
  dialogue::ScaffoldState scaffold;
  std::vector<CycleRecord> cycles;
  std::vector<tasks::SkeletonMap> maps;
  std::size_t mapIndex = 0;
  std::optional<tasks::ClozePassage> cloze;
  std::map<std::string, std::string> clozeResponses;
  std::map<std::string, double> clozeScores;

  retrieval::DialogueBasis basis;
  StudentModel model;
  dialogue::Memory memory;
  std::vector<std::string> mediaVisible;
  std::vector<Phase> phaseTrace;
  std::map<std::string, std::size_t> tutorTurnsByPhase;
  std::map<std::string, std::size_t> studentTurnsByPhase;
  std::vector<dialogue::TutorTurn> lastTurns;

  std::uint64_t nextSeq = 0;
  std::int64_t startedAt = 0;
  std::int64_t lastTimestamp = 0;

  bool complete() const { return phase == Phase::Complete; }
  const tasks::SkeletonMap* currentMap() const;

  bool operator==(const SessionState&) const = default;
};

// Timestamps are omitted when includeTimestamps is false.
nlohmann::json stateToJson(const SessionState& s, bool includeTimestamps = true);
// Hash of the timestamp-free serialization.
std::uint64_t stateHash(const SessionState& s);

struct StepResult {
  SessionState state;
  std::vector<dialogue::TutorTurn> turns;
  std::vector<SessionEvent> events;
  nlohmann::json taskResult;  // null unless a task was submitted
};

// Concepts still to be taught: not presumed covered and below mastery.
std::vector<std::string> uncoveredConcepts(const curriculum::Topic& topic, const StudentModel& model,
                                           double mastery);

// Opens the session in Lecture and runs the tutor up to the first question.
// The prior model is used only when config.persistPresumed is set.
StepResult startSession(const curriculum::Topic& topic, const dialogue::Resources& resources,
                        const std::string& sessionId, const std::string& studentId,
                        const StudentModel& prior, std::uint64_t seed,
                        const SessionConfig& config = {}, std::int64_t timestamp = 0);

// Throws SessionComplete, IllegalEventForPhase, and the errors of the task
// graders.
StepResult advance(const curriculum::Topic& topic, const dialogue::Resources& resources,
                   const SessionState& state, const StudentEvent& event);

std::optional<curriculum::QuestionTemplate> pendingQuestion(const SessionState& state,
                                                            const curriculum::Topic& topic);

// Rebuilds the state from a log by re-running its opening and every student
// event with the recorded timestamps.
SessionState replay(const curriculum::Topic& topic, const dialogue::Resources& resources,
                    const std::vector<SessionEvent>& log);

}  // namespace tutorkit::session
