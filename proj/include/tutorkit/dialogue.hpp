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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tutorkit/curriculum.hpp"
#include "tutorkit/phase.hpp"
#include "tutorkit/resources.hpp"
#include "tutorkit/retrieval.hpp"
#include "tutorkit/speechact.hpp"
#include "tutorkit/student_model.hpp"

namespace tutorkit::dialogue {

inline constexpr double kMasteryThreshold = 0.7;

enum class FeedbackLevel { Negative, NegativeNeutral, Neutral, PositiveNeutral, Positive };

std::string_view feedbackLevelName(FeedbackLevel level);

// Equal fifths of [0,1]; the top bin is closed. Throws OutOfRange.
FeedbackLevel feedbackLevel(double score);

enum class MediaDirective { None, Clear, Reset };

std::string_view mediaDirectiveName(MediaDirective d);

struct TutorTurn {
  std::vector<std::string> speech;
  std::optional<FeedbackLevel> feedback;
  std::optional<std::string> solidarity;  // present iff feedback is Negative
  std::optional<curriculum::QuestionTemplate> question;
  std::vector<std::string> mediaReveals;
  Phase phaseHint = Phase::Lecture;
  MediaDirective mediaDirective = MediaDirective::None;

  // All speech, solidarity included, as the student hears it.
  std::string spokenText() const;

  bool operator==(const TutorTurn&) const = default;
};

// Full record, answer keys included. Client payloads are built separately.
nlohmann::json tutorTurnToJson(const TutorTurn& turn);
TutorTurn tutorTurnFromJson(const nlohmann::json& j);

struct Resources {
  TemplateSet templates;
  std::vector<std::string> solidarity;
  speechact::Classifier classifier;

  static Resources bundled();
};

// Rotation cursors and the last utterance, carried across phases so that a
// repeat request always replays what the student just heard.
struct Memory {
  std::vector<std::string> lastSpeech;
  std::size_t solidarityCursor = 0;
  std::size_t phraseCursor = 0;

  bool operator==(const Memory&) const = default;
};

nlohmann::json memoryToJson(const Memory& m);
Memory memoryFromJson(const nlohmann::json& j);

std::string generatePreview(const curriculum::Concept& item, std::string_view topicName,
                            const TemplateSet& templates);

struct Context {
  Phase phase = Phase::Lecture;
  const curriculum::Topic* topic = nullptr;
  const curriculum::Concept* current = nullptr;
  std::optional<curriculum::QuestionTemplate> pending;
};

// Responses to acts other than Answer. Throws InvalidArgument for Answer.
TutorTurn handleInitiative(const speechact::SpeechAct& act, const Context& context,
                           const Resources& resources, Memory& memory);

// Feedback turn for an assessed answer; appends a solidarity line for
// Negative feedback.
TutorTurn feedbackTurn(double score, Phase phase, const Resources& resources, Memory& memory);

// Score in [0,1] for an answer to q. Verification-style items (yes/no
// expected) are scored from the act; free-text items by text::assess.
double scoreAnswer(const curriculum::QuestionTemplate& q, std::string_view utterance,
                   const speechact::SpeechAct& act);

// Acts that spend the pending question.
bool consumesQuestion(speechact::Kind kind);

// ---- Collaborative lecture ----

struct LectureState {
  bool previewed = false;
  std::size_t block = 0;
  std::size_t segment = 0;
  bool awaiting = false;

  bool operator==(const LectureState&) const = default;
};

nlohmann::json lectureStateToJson(const LectureState& s);
LectureState lectureStateFromJson(const nlohmann::json& j);

bool lectureFinished(const LectureState& state, const curriculum::Topic& topic);

struct LectureResult {
  LectureState state;
  TutorTurn turn;
  std::optional<speechact::SpeechAct> act;
  std::optional<double> score;  // only for assessed answers
};

// One tutor move. Without input: the preview, then one content segment per
// call, the block's last segment carrying its question. With input while a
// question is pending: routes by speech act and, on an answer, gives
// feedback and moves to the next block. Throws ScriptExhausted past the end.
LectureResult lectureStep(const curriculum::Topic& topic, const LectureState& state,
                          const std::optional<std::string>& input, const Resources& resources,
                          Memory& memory);

// ---- Scaffolding ----

enum class CycleStep { AwaitPrompt, AwaitPromptAnswer, AwaitVQ, AwaitVQAnswer, Done };

std::string_view cycleStepName(CycleStep step);

struct CycleState {
  std::string conceptId;
  CycleStep step = CycleStep::AwaitPrompt;
  std::string promptId;
  std::string vqId;
  std::vector<std::string> moves;  // Prompt, Feedback, VQ, Feedback

  bool operator==(const CycleState&) const = default;
};

struct ScaffoldState {
  int round = 1;
  std::vector<std::string> agenda;  // concepts still to cycle this round
  std::optional<CycleState> cycle;
  std::vector<std::string> revealed;  // media ids, in reveal order
  std::vector<CycleState> finishedCycles;

  bool operator==(const ScaffoldState&) const = default;
};

nlohmann::json scaffoldStateToJson(const ScaffoldState& s);
ScaffoldState scaffoldStateFromJson(const nlohmann::json& j);

// True when the tutor owes a move (a question is not pending).
bool scaffoldTutorToMove(const ScaffoldState& state);
bool scaffoldRoundFinished(const ScaffoldState& state);

struct ScaffoldThresholds {
  double mastery = kMasteryThreshold;
  double commonGround = retrieval::kCommonGroundThreshold;
  double summary = 0.6;

  bool operator==(const ScaffoldThresholds&) const = default;
};

struct ScaffoldResult {
  ScaffoldState state;
  TutorTurn turn;
  session::StudentModel model;
  std::optional<speechact::SpeechAct> act;
  std::optional<double> score;
  std::string assessedConceptId;
};

// One scaffolding move. Throws EmptyAgenda when no cycle is open and the
// agenda is empty.
ScaffoldResult scaffoldStep(const curriculum::Topic& topic, const ScaffoldState& state,
                            const std::optional<std::string>& input,
                            const retrieval::DialogueBasis& basis,
                            const session::StudentModel& model, const Resources& resources,
                            Memory& memory, const ScaffoldThresholds& thresholds = {},
                            std::int64_t timestamp = 0);

}  // namespace tutorkit::dialogue
