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
#include "tutorkit/session.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "tutorkit/error.hpp"
#include "tutorkit/rng.hpp"

namespace tutorkit::session {

using curriculum::Topic;
using dialogue::TutorTurn;
using nlohmann::json;

std::string_view basisSourceName(BasisSource s) {
  switch (s) {
    case BasisSource::Both: return "both";
    case BasisSource::Student: return "student";
    case BasisSource::Tutor: return "tutor";
  }
  return "both";
}

std::optional<BasisSource> basisSourceFromName(std::string_view name) {
  for (auto s : {BasisSource::Both, BasisSource::Student, BasisSource::Tutor})
    if (basisSourceName(s) == name) return s;
  return std::nullopt;
}

json configToJson(const SessionConfig& c) {
  return {{"mastery", c.thresholds.mastery},
          {"commonGround", c.thresholds.commonGround},
          {"summary", c.thresholds.summary},
          {"basisSource", basisSourceName(c.basisSource)},
          {"persistPresumed", c.persistPresumed},
          {"softLimitMs", c.softLimitMs}};
}

SessionConfig configFromJson(const json& j) {
  SessionConfig c;
  c.thresholds.mastery = j.value("mastery", c.thresholds.mastery);
  c.thresholds.commonGround = j.value("commonGround", c.thresholds.commonGround);
  c.thresholds.summary = j.value("summary", c.thresholds.summary);
  if (j.contains("basisSource")) {
    auto b = basisSourceFromName(j["basisSource"].get<std::string>());
    if (!b) throw Error(ErrorCode::InvalidArgument, "basis_source must be both, student or tutor",
                        "basisSource");
    c.basisSource = *b;
  }
  c.persistPresumed = j.value("persistPresumed", c.persistPresumed);
  c.softLimitMs = j.value("softLimitMs", c.softLimitMs);
  return c;
}

namespace {
constexpr std::array<std::pair<EventKind, std::string_view>, 5> kEventNames{{
    {EventKind::StudentUtterance, "StudentUtterance"},
    {EventKind::TutorTurn, "TutorTurn"},
    {EventKind::TaskSubmission, "TaskSubmission"},
    {EventKind::PhaseChange, "PhaseChange"},
    {EventKind::AssessmentRecord, "AssessmentRecord"},
}};
}  // namespace

std::string_view eventKindName(EventKind k) {
  for (const auto& [kind, name] : kEventNames)
    if (kind == k) return name;
  return "PhaseChange";
}

std::optional<EventKind> eventKindFromName(std::string_view name) {
  for (const auto& [kind, n] : kEventNames)
    if (n == name) return kind;
  return std::nullopt;
}

json eventToJson(const SessionEvent& e) {
  return {{"seq", e.seq}, {"timestamp", e.timestamp}, {"kind", eventKindName(e.kind)},
          {"payload", e.payload}};
}

SessionEvent eventFromJson(const json& j) {
  auto kind = eventKindFromName(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::SchemaViolation, "unknown event kind", "kind");
  return SessionEvent{j.at("seq").get<std::uint64_t>(), j.at("timestamp").get<std::int64_t>(),
                      *kind, j.at("payload")};
}

StudentEvent StudentEvent::say(std::string text, std::int64_t timestamp) {
  StudentEvent e;
  e.kind = Kind::Text;
  e.text = std::move(text);
  e.timestamp = timestamp;
  return e;
}

StudentEvent StudentEvent::submit(json task, std::int64_t timestamp) {
  StudentEvent e;
  e.kind = Kind::Task;
  e.task = task.is_null() ? json::object() : std::move(task);
  e.timestamp = timestamp;
  return e;
}

const tasks::SkeletonMap* SessionState::currentMap() const {
  return isConceptMaps(phase) && mapIndex < maps.size() ? &maps[mapIndex] : nullptr;
}

json stateToJson(const SessionState& s, bool includeTimestamps) {
  json model = studentModelToJson(s.model);
  if (!includeTimestamps)
    for (auto& [id, st] : model["perConcept"].items()) st.erase("lastAssessed");
  json maps = json::array(), cycles = json::array(), trace = json::array(), last = json::array();
  for (const auto& m : s.maps) maps.push_back(tasks::skeletonMapToJson(m));
  for (const auto& c : s.cycles)
    cycles.push_back({{"round", c.round}, {"conceptId", c.conceptId}, {"moves", c.moves}});
  for (Phase p : s.phaseTrace) trace.push_back(phaseName(p));
  for (const auto& t : s.lastTurns) last.push_back(dialogue::tutorTurnToJson(t));
  json j{{"sessionId", s.sessionId},
         {"studentId", s.studentId},
         {"topicId", s.topicId},
         {"seed", s.seed},
         {"config", configToJson(s.config)},
         {"phase", phaseName(s.phase)},
         {"rounds", s.rounds},
         {"summaryRatio", s.summaryRatio ? json(*s.summaryRatio) : json(nullptr)},
         {"initialAgenda", s.initialAgenda},
         {"agenda", s.agenda},
         {"lecture", dialogue::lectureStateToJson(s.lecture)},
         {"scaffold", dialogue::scaffoldStateToJson(s.scaffold)},
         {"cycles", cycles},
         {"maps", maps},
         {"mapIndex", s.mapIndex},
         {"cloze", s.cloze ? tasks::clozeToJson(*s.cloze) : json(nullptr)},
         {"clozeResponses", s.clozeResponses},
         {"clozeScores", s.clozeScores},
         {"basis", s.basis.toJson()},
         {"model", model},
         {"memory", dialogue::memoryToJson(s.memory)},
         {"mediaVisible", s.mediaVisible},
         {"phaseTrace", trace},
         {"tutorTurnsByPhase", s.tutorTurnsByPhase},
         {"studentTurnsByPhase", s.studentTurnsByPhase},
         {"lastTurns", last},
         {"nextSeq", s.nextSeq}};
  if (includeTimestamps) {
    j["startedAt"] = s.startedAt;
    j["lastTimestamp"] = s.lastTimestamp;
  }
  return j;
}

std::uint64_t stateHash(const SessionState& s) { return fnv1a(stateToJson(s, false).dump()); }

std::vector<std::string> uncoveredConcepts(const Topic& topic, const StudentModel& model,
                                           double mastery) {
  std::vector<std::string> out;
  for (const auto& c : topic.concepts)
    if (!model.presumedCovered(c.id) && model.coverage(c.id) < mastery) out.push_back(c.id);
  return out;
}

std::optional<curriculum::QuestionTemplate> pendingQuestion(const SessionState& s, const Topic& topic) {
  if (s.phase == Phase::Lecture && s.lecture.awaiting && s.lecture.block < topic.lectureScript.size())
    return topic.lectureScript[s.lecture.block].question;
  if (isScaffolding(s.phase) && s.scaffold.cycle) {
    const auto& c = *s.scaffold.cycle;
    const std::string* id = c.step == dialogue::CycleStep::AwaitPromptAnswer ? &c.promptId
                            : c.step == dialogue::CycleStep::AwaitVQAnswer  ? &c.vqId
                                                                            : nullptr;
    if (id)
      if (const auto* q = topic.findQuestion(*id)) return *q;
  }
  return std::nullopt;
}

namespace {

int roundOf(Phase p) { return p == Phase::ConceptMaps2 || p == Phase::Scaffolding2 ? 2 : 1; }

class Runner {
 public:
  Runner(const Topic& topic, const dialogue::Resources& res, SessionState state, std::int64_t now)
      : topic_(topic), res_(res), s_(std::move(state)), now_(now) {
    out_.state = SessionState{};
  }

  SessionState& state() { return s_; }

  void log(EventKind kind, json payload) {
    out_.events.push_back({s_.nextSeq++, now_, kind, std::move(payload)});
  }

  void emit(TutorTurn turn) {
    if (turn.mediaDirective != dialogue::MediaDirective::None) s_.mediaVisible.clear();
    for (const auto& m : turn.mediaReveals)
      if (std::find(s_.mediaVisible.begin(), s_.mediaVisible.end(), m) == s_.mediaVisible.end())
        s_.mediaVisible.push_back(m);
    s_.tutorTurnsByPhase[std::string(phaseName(turn.phaseHint))]++;
    if (isScaffolding(turn.phaseHint) && s_.config.basisSource != BasisSource::Student)
      s_.basis = s_.basis.addTurn(turn.spokenText());
    log(EventKind::TutorTurn, dialogue::tutorTurnToJson(turn));
    out_.turns.push_back(std::move(turn));
  }

  TutorTurn say(std::string_view key, Phase hint) {
    TutorTurn t;
    t.phaseHint = hint;
    t.speech.push_back(res_.templates.pick(key));
    return t;
  }

  void assessment(std::string_view source, const std::string& conceptId, double score,
                  json extra = json::object()) {
    extra["source"] = source;
    extra["conceptId"] = conceptId;
    extra["score"] = score;
    log(EventKind::AssessmentRecord, std::move(extra));
  }

  void enterPhase(Phase to) {
    log(EventKind::PhaseChange, {{"from", phaseName(s_.phase)}, {"to", phaseName(to)}});
    s_.phase = to;
    s_.phaseTrace.push_back(to);
    switch (to) {
      case Phase::Lecture:
        break;
      case Phase::Summary: {
        TutorTurn t = say("summary_request", Phase::Summary);
        t.mediaDirective = dialogue::MediaDirective::Clear;
        emit(std::move(t));
        break;
      }
      case Phase::ConceptMaps1:
      case Phase::ConceptMaps2: {
        const int round = roundOf(to);
        s_.agenda = uncoveredConcepts(topic_, s_.model, s_.config.thresholds.mastery);
        std::vector<const curriculum::Concept*> concepts;
        for (const auto& id : s_.agenda) concepts.push_back(&topic_.conceptById(id));
        s_.maps = tasks::generateSkeletonMaps(concepts, mixSeed(s_.seed, static_cast<std::uint64_t>(round)));
        s_.mapIndex = 0;
        if (s_.maps.empty()) {
          log(EventKind::AssessmentRecord,
              {{"source", "ConceptMapGeneration"}, {"maps", 0}, {"note", "no triples to map"}});
          enterPhase(round == 1 ? Phase::Scaffolding1 : Phase::Scaffolding2);
        } else {
          emit(say("maps_intro", to));
        }
        break;
      }
      case Phase::Scaffolding1:
      case Phase::Scaffolding2: {
        const int round = roundOf(to);
        s_.agenda = uncoveredConcepts(topic_, s_.model, s_.config.thresholds.mastery);
        dialogue::ScaffoldState next;
        next.round = round;
        next.agenda = s_.agenda;
        if (round == 2) next.revealed = s_.scaffold.revealed;
        s_.scaffold = std::move(next);
        if (s_.agenda.empty()) {
          leaveScaffolding();
          break;
        }
        TutorTurn intro = say("scaffold_intro", to);
        if (round == 1) intro.mediaDirective = dialogue::MediaDirective::Reset;
        emit(std::move(intro));
        runScaffold();
        break;
      }
      case Phase::Cloze:
        s_.cloze = tasks::generateCloze(topic_.idealSummary);
        emit(say("cloze_intro", Phase::Cloze));
        break;
      case Phase::Complete:
        break;
    }
  }

  void runLecture() {
    while (!s_.lecture.awaiting && !dialogue::lectureFinished(s_.lecture, topic_)) {
      auto r = dialogue::lectureStep(topic_, s_.lecture, std::nullopt, res_, s_.memory);
      s_.lecture = r.state;
      emit(std::move(r.turn));
    }
    if (dialogue::lectureFinished(s_.lecture, topic_)) enterPhase(Phase::Summary);
  }

  void scaffoldMove(const std::optional<std::string>& input) {
    auto pending = pendingQuestion(s_, topic_);
    auto r = dialogue::scaffoldStep(topic_, s_.scaffold, input, s_.basis, s_.model, res_, s_.memory,
                                    s_.config.thresholds, now_);
    s_.scaffold = std::move(r.state);
    s_.model = std::move(r.model);
    if (r.score)
      assessment("Scaffold", r.assessedConceptId, *r.score,
                 {{"questionId", pending ? pending->id : std::string()}});
    emit(std::move(r.turn));
  }

  void runScaffold() {
    while (dialogue::scaffoldTutorToMove(s_.scaffold)) scaffoldMove(std::nullopt);
    if (dialogue::scaffoldRoundFinished(s_.scaffold)) leaveScaffolding();
  }

  void leaveScaffolding() {
    const int round = s_.scaffold.round;
    for (const auto& c : s_.scaffold.finishedCycles) s_.cycles.push_back({round, c.conceptId, c.moves});
    if (s_.scaffold.cycle) s_.cycles.push_back({round, s_.scaffold.cycle->conceptId, s_.scaffold.cycle->moves});
    s_.scaffold.finishedCycles.clear();
    s_.scaffold.cycle.reset();
    enterPhase(round == 1 && s_.rounds == 2 ? Phase::ConceptMaps2 : Phase::Cloze);
  }

  void onText(const std::string& text) {
    auto act = res_.classifier.classify(text);
    log(EventKind::StudentUtterance,
        {{"text", text}, {"act", speechact::kindName(act.kind)}, {"confidence", act.confidence}});
    s_.studentTurnsByPhase[std::string(phaseName(s_.phase))]++;
    switch (s_.phase) {
      case Phase::Lecture: {
        auto pending = pendingQuestion(s_, topic_);
        auto r = dialogue::lectureStep(topic_, s_.lecture, text, res_, s_.memory);
        s_.lecture = r.state;
        if (r.score && pending) assessment("Lecture", pending->conceptId, *r.score, {{"questionId", pending->id}});
        emit(std::move(r.turn));
        runLecture();
        break;
      }
      case Phase::Summary: {
        std::set<std::string> presumed;
        for (const auto& c : topic_.concepts)
          if (s_.model.presumedCovered(c.id)) presumed.insert(c.id);
        auto r = tasks::gradeSummary(text, topic_, presumed, s_.config.thresholds.summary);
        for (const auto& c : topic_.concepts) {
          double score = r.scores.at(c.id);
          s_.model = coverageUpdate(s_.model, c.id, score, EvidenceSource::Summary,
                                    s_.config.thresholds.summary, now_);
          assessment("Summary", c.id, score);
        }
        s_.rounds = r.rounds;
        s_.summaryRatio = r.ratio;
        log(EventKind::AssessmentRecord, {{"source", "SummaryResult"},
                                          {"covered", r.coveredConceptIds},
                                          {"ratio", r.ratio},
                                          {"rounds", r.rounds}});
        enterPhase(Phase::ConceptMaps1);
        break;
      }
      case Phase::Scaffolding1:
      case Phase::Scaffolding2:
        if (s_.config.basisSource != BasisSource::Tutor) s_.basis = s_.basis.addTurn(text);
        scaffoldMove(text);
        runScaffold();
        break;
      default:
        break;
    }
  }

  void onMapTask(const json& task) {
    tasks::SkeletonMap& map = s_.maps.at(s_.mapIndex);
    json result;
    if (task.contains("slotId")) {
      const std::string slotId = task.at("slotId").get<std::string>();
      const std::string answer = task.value("answer", std::string());
      auto r = tasks::gradeMapEntry(map, slotId, answer);
      log(EventKind::AssessmentRecord, {{"source", "ConceptMap"},
                                        {"mapId", map.mapId},
                                        {"slotId", slotId},
                                        {"accepted", r.accepted}});
      result = {{"accepted", r.accepted}, {"bankRemaining", map.bankSize()},
                {"mapComplete", r.complete}, {"mapId", map.mapId}};
      if (r.complete) s_.mapIndex++;
    } else {
      result = {{"skipped", true}, {"mapId", map.mapId}};
      s_.mapIndex++;
    }
    out_.taskResult = result;
    if (s_.mapIndex >= s_.maps.size())
      enterPhase(s_.phase == Phase::ConceptMaps1 ? Phase::Scaffolding1 : Phase::Scaffolding2);
  }

  void checkBlank(const std::string& id) const {
    for (const auto& b : s_.cloze->blanks)
      if (b.blankId == id) return;
    throw Error(ErrorCode::UnknownBlank, "unknown blank " + id, id);
  }

  void onClozeTask(const json& task) {
    if (task.contains("blankId")) {
      const std::string id = task.at("blankId").get<std::string>();
      checkBlank(id);
      s_.clozeResponses[id] = task.value("answer", std::string());
      out_.taskResult = {{"acknowledged", true}};
      return;
    }
    if (task.contains("answers")) {
      for (const auto& [id, v] : task.at("answers").items()) {
        checkBlank(id);
        s_.clozeResponses[id] = v.get<std::string>();
      }
    }
    s_.clozeScores = tasks::gradeCloze(*s_.cloze, s_.clozeResponses);
    for (const auto& b : s_.cloze->blanks) {
      double score = s_.clozeScores.at(b.blankId);
      s_.model = coverageUpdate(s_.model, b.conceptId, score, EvidenceSource::Cloze,
                                s_.config.thresholds.summary, now_);
      assessment("Cloze", b.conceptId, score, {{"blankId", b.blankId}});
    }
    emit(say("complete", Phase::Cloze));
    enterPhase(Phase::Complete);
    out_.taskResult = {{"acknowledged", true}};
  }

  void onTask(const json& task) {
    log(EventKind::TaskSubmission, {{"task", task}});
    if (isConceptMaps(s_.phase))
      onMapTask(task);
    else
      onClozeTask(task);
  }

  StepResult finish() {
    s_.lastTurns = out_.turns;
    out_.state = std::move(s_);
    return std::move(out_);
  }

 private:
  const Topic& topic_;
  const dialogue::Resources& res_;
  SessionState s_;
  std::int64_t now_;
  StepResult out_;
};

bool acceptsText(Phase p) { return p == Phase::Lecture || p == Phase::Summary || isScaffolding(p); }
bool acceptsTask(Phase p) { return isConceptMaps(p) || p == Phase::Cloze; }

}  // namespace

StepResult startSession(const Topic& topic, const dialogue::Resources& resources,
                        const std::string& sessionId, const std::string& studentId,
                        const StudentModel& prior, std::uint64_t seed, const SessionConfig& config,
                        std::int64_t timestamp) {
  SessionState s;
  s.sessionId = sessionId;
  s.studentId = studentId;
  s.topicId = topic.id;
  s.seed = seed;
  s.config = config;
  if (config.persistPresumed) s.model = prior;
  s.model.studentId = studentId;
  s.initialAgenda = uncoveredConcepts(topic, s.model, config.thresholds.mastery);
  s.agenda = s.initialAgenda;
  s.phase = Phase::Lecture;
  s.phaseTrace.push_back(Phase::Lecture);
  s.startedAt = timestamp;
  s.lastTimestamp = timestamp;

  Runner run(topic, resources, std::move(s), timestamp);
  run.log(EventKind::PhaseChange, {{"from", nullptr},
                                   {"to", phaseName(Phase::Lecture)},
                                   {"sessionId", sessionId},
                                   {"studentId", studentId},
                                   {"topicId", topic.id},
                                   {"seed", seed},
                                   {"config", configToJson(config)},
                                   {"priorModel", studentModelToJson(prior)}});
  run.runLecture();
  return run.finish();
}

StepResult advance(const Topic& topic, const dialogue::Resources& resources, const SessionState& state,
                   const StudentEvent& event) {
  if (state.complete()) throw Error(ErrorCode::SessionComplete, "session is complete", state.sessionId);
  const bool text = event.kind == StudentEvent::Kind::Text;
  if (text ? !acceptsText(state.phase) : !acceptsTask(state.phase))
    throw Error(ErrorCode::IllegalEventForPhase,
                std::string(text ? "text turn" : "task submission") + " not accepted during " +
                    std::string(phaseName(state.phase)),
                std::string(phaseName(state.phase)));
  if (!text && !event.task.is_object())
    throw Error(ErrorCode::InvalidArgument, "task submission must be an object", "task");

  SessionState s = state;
  s.lastTimestamp = event.timestamp;
  Runner run(topic, resources, std::move(s), event.timestamp);
  if (text)
    run.onText(event.text);
  else
    run.onTask(event.task);
  return run.finish();
}

SessionState replay(const Topic& topic, const dialogue::Resources& resources,
                    const std::vector<SessionEvent>& log) {
  if (log.empty() || log.front().kind != EventKind::PhaseChange ||
      !log.front().payload.contains("sessionId"))
    throw Error(ErrorCode::SchemaViolation, "log does not open with a session start", "events");
  const json& open = log.front().payload;
  StepResult cur = startSession(topic, resources, open.at("sessionId").get<std::string>(),
                                open.at("studentId").get<std::string>(),
                                studentModelFromJson(open.at("priorModel")),
                                open.at("seed").get<std::uint64_t>(), configFromJson(open.at("config")),
                                log.front().timestamp);
  for (std::size_t i = 1; i < log.size(); ++i) {
    const SessionEvent& e = log[i];
    if (e.kind == EventKind::StudentUtterance)
      cur = advance(topic, resources, cur.state,
                    StudentEvent::say(e.payload.at("text").get<std::string>(), e.timestamp));
    else if (e.kind == EventKind::TaskSubmission)
      cur = advance(topic, resources, cur.state, StudentEvent::submit(e.payload.at("task"), e.timestamp));
  }
  return cur.state;
}

}  // namespace tutorkit::session
