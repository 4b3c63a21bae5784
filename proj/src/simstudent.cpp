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
#include "tutorkit/simstudent.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>

#include "tutorkit/error.hpp"
#include "tutorkit/rng.hpp"

namespace tutorkit::simstudent {

using nlohmann::json;

Policy Policy::noisy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::OutOfRange, "noisy p must be in [0,1]", "p");
  return {Kind::Noisy, p, 0};
}

Policy Policy::summaryOnly(int k) {
  if (k < 0) throw Error(ErrorCode::OutOfRange, "summary-only k must be non-negative", "k");
  return {Kind::SummaryOnly, 0.0, k};
}

Policy Policy::parse(const std::string& spec) {
  std::string s;
  for (char c : spec) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : s.substr(colon + 1);
  try {
    if (head == "perfect" && arg.empty()) return perfect();
    if (head == "ignorant" && arg.empty()) return ignorant();
    if (head == "noisy" && !arg.empty()) return noisy(std::stod(arg));
    if ((head == "summaryonly" || head == "summary-only") && !arg.empty()) return summaryOnly(std::stoi(arg));
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown policy '" + spec + "' (perfect, ignorant, noisy:<p>, summaryonly:<k>)", "policy");
}

std::string Policy::name() const {
  switch (kind) {
    case Kind::Perfect: return "perfect";
    case Kind::Ignorant: return "ignorant";
    case Kind::Noisy: return "noisy:" + std::to_string(p);
    case Kind::SummaryOnly: return "summaryonly:" + std::to_string(k);
  }
  return "perfect";
}

json reportToJson(const EpisodeReport& r) {
  json transcript = json::array(), cycles = json::array();
  for (const auto& e : r.transcript)
    transcript.push_back({{"role", e.role}, {"phase", e.phase}, {"text", e.text}, {"detail", e.detail}});
  for (const auto& c : r.cycles) cycles.push_back({{"round", c.round}, {"conceptId", c.conceptId}, {"moves", c.moves}});
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.transcriptHash));
  char shash[20];
  std::snprintf(shash, sizeof shash, "%016llx", static_cast<unsigned long long>(r.stateHash));
  return {{"sessionId", r.sessionId},
          {"topicId", r.topicId},
          {"policy", r.policy},
          {"seed", r.seed},
          {"phaseTrace", r.phaseTrace},
          {"roundsUsed", r.roundsUsed},
          {"summaryRatio", r.summaryRatio},
          {"lectureTutorTurns", r.lectureTutorTurns},
          {"lectureStudentTurns", r.lectureStudentTurns},
          {"turnRatio", r.turnRatio},
          {"finalCoverage", r.finalCoverage},
          {"cycles", cycles},
          {"transcriptHash", hash},
          {"stateHash", shash},
          {"requests", r.requests},
          {"transcript", transcript}};
}

namespace {

constexpr const char* kWrongAnswer = "something else entirely";
constexpr std::size_t kRequestLimit = 20000;

class Driver {
 public:
  Driver(service::Service& svc, const curriculum::Topic& topic, const Policy& policy, std::uint64_t seed)
      : svc_(svc), topic_(topic), policy_(policy), rng_(mixSeed(seed, 0x5eed)) {}

  EpisodeReport run(const std::string& studentId, std::uint64_t seed) {
    json view = call(svc_.post("/v1/sessions", {{"studentId", studentId}, {"topicId", topic_.id}, {"seed", seed}}), 201);
    recordTurns(view.at("lastTutorTurns"));
    while (!view.at("complete").get<bool>()) {
      if (report_.requests > kRequestLimit) throw Error(ErrorCode::InvalidArgument, "episode did not terminate");
      view = step(view);
    }
    return finish(view.at("sessionId").get<std::string>(), seed);
  }

 private:
  json call(const service::ApiResponse& r, int expected = 200) {
    ++report_.requests;
    if (r.status != expected)
      throw Error(ErrorCode::InvalidArgument,
                  "unexpected HTTP " + std::to_string(r.status) + " from service: " + r.body);
    return r.json();
  }

  void recordTurns(const json& turns) {
    for (const auto& t : turns) {
      std::string text;
      for (const auto& s : t.at("speech")) text += (text.empty() ? "" : " ") + s.get<std::string>();
      json detail{{"feedback", t.at("feedback")},
                  {"question", t.at("question").is_null() ? json(nullptr) : t["question"]["id"]},
                  {"mediaReveals", t.at("mediaReveals")},
                  {"mediaDirective", t.at("mediaDirective")}};
      report_.transcript.push_back({"tutor", t.at("phase").get<std::string>(), text, detail});
    }
  }

  bool knows() {
    switch (policy_.kind) {
      case Policy::Kind::Perfect: return true;
      case Policy::Kind::Noisy: return rng_.bernoulli(policy_.p);
      default: return false;
    }
  }

  std::string answerFor(const json& question) {
    const auto* q = topic_.findQuestion(question.at("id").get<std::string>());
    if (!q) throw Error(ErrorCode::DanglingReference, "question not in topic", question.dump());
    if (knows()) return q->expectedAnswer;
    if (policy_.kind != Policy::Kind::Noisy) return kDontKnow;
    if (auto yn = curriculum::yesNoClass(q->expectedAnswer)) return *yn == curriculum::YesNo::Yes ? "no" : "yes";
    return kWrongAnswer;
  }

  std::string summary() {
    std::vector<std::string> parts;
    const std::size_t n = topic_.concepts.size();
    switch (policy_.kind) {
      case Policy::Kind::Perfect:
        for (std::size_t i = 0; i < (n + 1) / 2; ++i) parts.push_back(topic_.concepts[i].statement);
        break;
      case Policy::Kind::SummaryOnly:
        if (static_cast<std::size_t>(policy_.k) > n)
          throw Error(ErrorCode::OutOfRange, "summary-only k exceeds the topic's concept count", "k");
        for (std::size_t i = 0; i < static_cast<std::size_t>(policy_.k); ++i)
          parts.push_back(topic_.concepts[i].statement);
        break;
      case Policy::Kind::Noisy:
        for (const auto& c : topic_.concepts)
          if (rng_.bernoulli(policy_.p)) parts.push_back(c.statement);
        break;
      case Policy::Kind::Ignorant:
        break;
    }
    if (parts.empty()) return kDontKnow;
    std::string out;
    for (const auto& s : parts) out += (out.empty() ? "" : " ") + s;
    return out;
  }

  json say(const std::string& id, const std::string& text, const std::string& phase) {
    report_.transcript.push_back({"student", phase, text, nullptr});
    json r = call(svc_.post("/v1/sessions/" + id + "/turn", {{"text", text}}));
    recordTurns(r.at("tutorTurns"));
    return r.at("view");
  }

  json submit(const std::string& id, const json& task, const std::string& phase, json* result = nullptr) {
    report_.transcript.push_back({"student", phase, "", task});
    json r = call(svc_.post("/v1/sessions/" + id + "/task", task));
    recordTurns(r.at("tutorTurns"));
    if (result) *result = r.at("result");
    return r.at("view");
  }

  // Recognition: try each bank entry of the slot's role until one sticks.
  json solveMap(const std::string& id, json view, const std::string& phase) {
    const std::string mapId = view.at("taskPayload").at("mapId").get<std::string>();
    for (;;) {
      const json& payload = view.at("taskPayload");
      if (payload.is_null() || payload.value("mapId", std::string()) != mapId) return view;
      const json* open = nullptr;
      for (const auto& s : payload.at("slots"))
        if (s.at("open").get<bool>()) {
          open = &s;
          break;
        }
      if (!open) return view;
      const std::string slotId = open->at("slotId").get<std::string>();
      const json bank = open->at("role") == "node" ? payload.at("nodeBank") : payload.at("edgeBank");
      bool accepted = false;
      json next;
      for (const auto& entry : bank) {
        json result;
        next = submit(id, {{"slotId", slotId}, {"answer", entry}}, phase, &result);
        if (result.at("accepted").get<bool>()) {
          accepted = true;
          break;
        }
      }
      if (!accepted) return submit(id, json::object(), phase);
      view = std::move(next);
    }
  }

  json step(const json& view) {
    const std::string id = view.at("sessionId").get<std::string>();
    const std::string phase = view.at("phase").get<std::string>();
    if (phase == "Summary") return say(id, summary(), phase);
    if (phase == "Lecture" || phase == "Scaffolding1" || phase == "Scaffolding2") {
      const json& q = view.at("pendingQuestion");
      return say(id, q.is_null() ? std::string() : answerFor(q), phase);
    }
    if (phase == "ConceptMaps1" || phase == "ConceptMaps2") {
      if (policy_.kind != Policy::Kind::Ignorant && policy_.kind != Policy::Kind::SummaryOnly && knows())
        return solveMap(id, view, phase);
      return submit(id, json::object(), phase);
    }
    if (phase == "Cloze") {
      json answers = json::object();
      std::vector<curriculum::ConceptSpan> spans = topic_.idealSummary.conceptSpans;
      std::stable_sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
      const json& ids = view.at("taskPayload").at("blankIds");
      for (std::size_t i = 0; i < ids.size() && i < spans.size(); ++i)
        if (knows()) answers[ids[i].get<std::string>()] = spans[i].keyTerm;
      return submit(id, {{"answers", answers}}, phase);
    }
    throw Error(ErrorCode::IllegalEventForPhase, "policy has no move for phase " + phase);
  }

  EpisodeReport finish(const std::string& sessionId, std::uint64_t seed) {
    session::SessionState s = svc_.store().get(sessionId);
    EpisodeReport& r = report_;
    r.sessionId = sessionId;
    r.topicId = topic_.id;
    r.policy = policy_.name();
    r.seed = seed;
    for (Phase p : s.phaseTrace) r.phaseTrace.emplace_back(phaseName(p));
    for (const auto& e : r.transcript) {
      if (e.phase != "Lecture") continue;
      (e.role == "tutor" ? r.lectureTutorTurns : r.lectureStudentTurns)++;
    }
    r.turnRatio = r.lectureStudentTurns
                      ? static_cast<double>(r.lectureTutorTurns) / static_cast<double>(r.lectureStudentTurns)
                      : 0.0;
    for (const auto& c : topic_.concepts) r.finalCoverage[c.id] = s.model.coverage(c.id);
    r.roundsUsed = s.rounds;
    r.summaryRatio = s.summaryRatio.value_or(0.0);
    r.cycles = s.cycles;
    json t = json::array();
    for (const auto& e : r.transcript) t.push_back({e.role, e.phase, e.text, e.detail});
    r.transcriptHash = fnv1a(t.dump());
    r.stateHash = session::stateHash(s);
    return r;
  }

  service::Service& svc_;
  const curriculum::Topic& topic_;
  Policy policy_;
  Rng rng_;
  EpisodeReport report_;
};

}  // namespace

EpisodeReport runEpisode(service::Service& service, const std::string& topicId, const Policy& policy,
                         std::uint64_t seed, const std::string& studentId) {
  const curriculum::Topic& topic = service.curriculum().topic(topicId);
  return Driver(service, topic, policy, seed).run(studentId, seed);
}

std::unique_ptr<service::Service> makeSimService(const std::string& curriculumDir) {
  service::ServiceOptions opts;
  auto tick = std::make_shared<std::atomic<std::int64_t>>(0);
  opts.store.clock = [tick] { return tick->fetch_add(1000) + 1000; };
  return std::make_unique<service::Service>(curriculum::loadCurriculum(curriculumDir), dialogue::Resources::bundled(),
                                            testbank::ItemBank::bundled(), std::move(opts));
}

EpisodeReport runEpisode(const std::string& curriculumDir, const std::string& topicId, const Policy& policy,
                         std::uint64_t seed) {
  auto svc = makeSimService(curriculumDir);
  return runEpisode(*svc, topicId, policy, seed);
}

}  // namespace tutorkit::simstudent
