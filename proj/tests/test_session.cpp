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
#include <algorithm>
#include <atomic>
#include <filesystem>
#include <future>
#include <random>
#include <thread>

#include "doctest.h"
#include "support.hpp"
#include "tutorkit/error.hpp"
#include "tutorkit/session.hpp"
#include "tutorkit/session_store.hpp"
#include "tutorkit/student_model.hpp"

using namespace tutorkit;
using namespace tutorkit::session;
using nlohmann::json;

namespace {

const std::vector<Phase> kCanonical = {Phase::Lecture,      Phase::Summary,      Phase::ConceptMaps1,
                                       Phase::Scaffolding1, Phase::ConceptMaps2, Phase::Scaffolding2,
                                       Phase::Cloze,        Phase::Complete};

bool isSubsequence(const std::vector<Phase>& trace) {
  std::size_t j = 0;
  for (Phase p : trace) {
    while (j < kCanonical.size() && kCanonical[j] != p) ++j;
    if (j == kCanonical.size()) return false;
    ++j;
  }
  return true;
}

struct Episode {
  SessionState state;
  std::vector<SessionEvent> log;
  std::vector<dialogue::TutorTurn> turns;
  std::size_t masteredInScaffold = 0;
  std::vector<std::string> unrevealed;  // mastered in scaffolding without their media
  std::size_t mediaShrankInScaffold = 0;
};

bool scaffolding(Phase p) { return p == Phase::Scaffolding1 || p == Phase::Scaffolding2; }

// Drives a session directly through advance(). knowP is the chance of a right
// answer; the rng decides everything else.
Episode drive(const curriculum::Topic& topic, std::uint64_t seed, double knowP, const SessionConfig& cfg = {},
              const StudentModel& prior = {}) {
  std::mt19937_64 g(seed);
  std::bernoulli_distribution knows(knowP);
  Episode ep;
  auto r = startSession(topic, tktest::resources(), "s-test", "stu", prior, seed, cfg, 1000);
  ep.state = r.state;
  ep.log = r.events;
  ep.turns = r.turns;
  std::int64_t clock = 1000;
  for (int guard = 0; guard < 5000 && !ep.state.complete(); ++guard) {
    clock += 500 + static_cast<std::int64_t>(g() % 5000);
    StudentEvent ev;
    switch (ep.state.phase) {
      case Phase::Summary: {
        std::string s;
        for (const auto& c : topic.concepts)
          if (knows(g)) s += c.statement + " ";
        ev = StudentEvent::say(s.empty() ? "I don't know" : s, clock);
        break;
      }
      case Phase::ConceptMaps1:
      case Phase::ConceptMaps2: {
        const auto* m = ep.state.currentMap();
        REQUIRE(m);
        const tasks::MapSlot* open = nullptr;
        for (const auto& s : m->slots)
          if (s.blanked && !s.filled) {
            open = &s;
            break;
          }
        if (g() % 6 == 0 || !open) {
          ev = StudentEvent::submit(json::object(), clock);
        } else {
          ev = StudentEvent::submit({{"slotId", open->slotId}, {"answer", knows(g) ? open->answer : "nonsense"}},
                                    clock);
        }
        break;
      }
      case Phase::Cloze: {
        REQUIRE(ep.state.cloze);
        if (g() % 3 == 0) {
          const auto& b = ep.state.cloze->blanks[g() % ep.state.cloze->blanks.size()];
          ev = StudentEvent::submit({{"blankId", b.blankId}, {"answer", knows(g) ? b.key : "nope"}}, clock);
        } else {
          json answers = json::object();
          for (const auto& b : ep.state.cloze->blanks)
            if (knows(g)) answers[b.blankId] = b.key;
          ev = StudentEvent::submit({{"answers", answers}}, clock);
        }
        break;
      }
      default: {
        auto q = pendingQuestion(ep.state, topic);
        const int roll = static_cast<int>(g() % 10);
        if (!q)
          ev = StudentEvent::say("", clock);
        else if (roll == 0)
          ev = StudentEvent::say("can you repeat that", clock);
        else if (roll == 1)
          ev = StudentEvent::say("what do you mean?", clock);
        else
          ev = StudentEvent::say(knows(g) ? q->expectedAnswer : "I don't know", clock);
      }
    }
    auto step = advance(topic, tktest::resources(), ep.state, ev);
    if (scaffolding(ep.state.phase)) {
      for (const auto& c : topic.concepts) {
        const double m = ep.state.config.thresholds.mastery;
        if (!(ep.state.model.coverage(c.id) < m && step.state.model.coverage(c.id) >= m)) continue;
        ++ep.masteredInScaffold;
        for (const auto& media : c.mediaRefs) {
          bool shown = std::find(ep.state.mediaVisible.begin(), ep.state.mediaVisible.end(), media) !=
                       ep.state.mediaVisible.end();
          for (const auto& t : step.turns)
            shown |= std::find(t.mediaReveals.begin(), t.mediaReveals.end(), media) != t.mediaReveals.end();
          if (!shown) ep.unrevealed.push_back(c.id + ":" + media);
        }
      }
    }
    if (scaffolding(ep.state.phase) && step.state.phase == ep.state.phase)
      for (const auto& media : ep.state.mediaVisible)
        if (std::find(step.state.mediaVisible.begin(), step.state.mediaVisible.end(), media) ==
            step.state.mediaVisible.end())
          ++ep.mediaShrankInScaffold;
    ep.state = step.state;
    ep.log.insert(ep.log.end(), step.events.begin(), step.events.end());
    ep.turns.insert(ep.turns.end(), step.turns.begin(), step.turns.end());
  }
  REQUIRE(ep.state.complete());
  return ep;
}

}  // namespace

TEST_SUITE("session") {

TEST_CASE("randomized sessions satisfy phase invariants and replay exactly") {
  const auto& topic = tktest::demoTopic();
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const double p = (seed % 5) / 4.0;
    auto ep = drive(topic, seed, p);
    INFO("seed " << seed);
    CHECK(isSubsequence(ep.state.phaseTrace));
    const bool two = std::find(ep.state.phaseTrace.begin(), ep.state.phaseTrace.end(), Phase::Scaffolding2) !=
                     ep.state.phaseTrace.end();
    REQUIRE(ep.state.summaryRatio.has_value());
    CHECK(two == (*ep.state.summaryRatio <= 1.0 / 3 + 1e-12));
    CHECK(two == (ep.state.rounds == 2));
    for (std::size_t i = 1; i < ep.log.size(); ++i) CHECK(ep.log[i].seq == ep.log[i - 1].seq + 1);
    const auto replayed = replay(topic, tktest::resources(), ep.log);
    CHECK(stateHash(replayed) == stateHash(ep.state));
    CHECK(replayed == ep.state);
    CHECK_THROWS_AS(advance(topic, tktest::resources(), ep.state, StudentEvent::say("hello")), Error);
  }
}

TEST_CASE("scaffold agenda and maps exclude presumed and mastered concepts") {
  const auto& topic = tktest::demoTopic();
  StudentModel prior;
  prior.studentId = "stu";
  prior.perConcept["pf2"] = {1.0, true, 5};
  prior.perConcept["pf5"] = {1.0, true, 5};
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto ep = drive(topic, seed, 0.3, {}, prior);
    for (const auto& c : ep.state.cycles) {
      CHECK(c.conceptId != "pf2");
      CHECK(c.conceptId != "pf5");
    }
    for (const auto& e : ep.log)
      if (e.kind == EventKind::PhaseChange && e.payload.contains("agenda"))
        for (const auto& id : e.payload["agenda"]) {
          CHECK(id != "pf2");
          CHECK(id != "pf5");
        }
    for (const auto& m : ep.state.maps) {
      CHECK(m.conceptId != "pf2");
      CHECK(m.conceptId != "pf5");
    }
    CHECK(std::find(ep.state.initialAgenda.begin(), ep.state.initialAgenda.end(), "pf2") ==
          ep.state.initialAgenda.end());
  }
}

TEST_CASE("uncoveredConcepts filter") {
  const auto& topic = tktest::demoTopic();
  StudentModel m;
  m.perConcept["pf1"] = {0.9, false, 1};
  m.perConcept["pf2"] = {0.1, true, 1};
  m.perConcept["pf3"] = {0.69, false, 1};
  auto u = uncoveredConcepts(topic, m, 0.7);
  CHECK(std::find(u.begin(), u.end(), "pf1") == u.end());
  CHECK(std::find(u.begin(), u.end(), "pf2") == u.end());
  CHECK(std::find(u.begin(), u.end(), "pf3") != u.end());
  CHECK(u.size() == 9);
}

TEST_CASE("per-turn invariants along a session") {
  const auto& topic = tktest::demoTopic();
  std::size_t mastered = 0;
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    auto ep = drive(topic, seed, 0.6);
    std::size_t cycles = 0;
    std::map<std::pair<int, std::string>, int> prompts, vqs;
    for (const auto& t : ep.turns)
      CHECK(t.solidarity.has_value() == (t.feedback == dialogue::FeedbackLevel::Negative));
    CHECK(ep.mediaShrankInScaffold == 0);
    for (const auto& c : ep.state.cycles) {
      ++cycles;
      prompts[{c.round, c.conceptId}] += static_cast<int>(std::count(c.moves.begin(), c.moves.end(), "Prompt"));
      vqs[{c.round, c.conceptId}] += static_cast<int>(std::count(c.moves.begin(), c.moves.end(), "VQ"));
    }
    for (const auto& [k, n] : prompts) CHECK(n <= 1);
    for (const auto& [k, n] : vqs) CHECK(n <= 1);
    CHECK(ep.unrevealed.empty());
    mastered += ep.masteredInScaffold;
    CHECK(ep.turns.back().phaseHint == Phase::Cloze);
  }
  CHECK(mastered > 0);
}

TEST_CASE("event json round trip") {
  auto ep = drive(tktest::demoTopic(), 77, 0.5);
  for (const auto& e : ep.log) CHECK(eventFromJson(eventToJson(e)) == e);
  CHECK(configFromJson(configToJson(ep.state.config)) == ep.state.config);
}

TEST_CASE("state hash ignores timestamps only") {
  auto a = drive(tktest::demoTopic(), 5, 0.5);
  auto b = a.state;
  b.lastTimestamp += 12345;
  b.startedAt += 1;
  CHECK(stateHash(a.state) == stateHash(b));
  b.rounds = 3 - b.rounds;
  CHECK(stateHash(a.state) != stateHash(b));
}

TEST_CASE("student model coverage update") {
  StudentModel m;
  m = coverageUpdate(m, "pf1", 0.4, EvidenceSource::Scaffold, 0.6, 10);
  CHECK(m.coverage("pf1") == doctest::Approx(0.4));
  m = coverageUpdate(m, "pf1", 0.2, EvidenceSource::Scaffold, 0.6, 11);
  CHECK(m.coverage("pf1") >= 0.4 - 1e-12);
  m = coverageUpdate(m, "pf2", 0.9, EvidenceSource::Summary, 0.6, 12);
  CHECK(m.presumedCovered("pf2"));
  CHECK(studentModelFromJson(studentModelToJson(m)) == m);
  CHECK_THROWS_AS(coverageUpdate(m, "pf1", 1.5, EvidenceSource::Cloze, 0.6), Error);
}

TEST_CASE("store persists logs and snapshots and recovers") {
  auto dir = tktest::scratchDir("store");
  const auto& cur = tktest::demo();
  std::string sid;
  SessionState finalState;
  {
    SessionStore::Options o;
    o.dataDir = dir.string();
    std::int64_t t = 0;
    o.clock = [&t] { return t += 1000; };
    SessionStore store(cur, tktest::resources(), o);
    auto out = store.start("alice", "protein-function", 9);
    sid = out.state.sessionId;
    CHECK_THROWS_AS(store.start("alice", "protein-function"), Error);
    CHECK_THROWS_AS(store.start("bob", "nope"), Error);
    const auto& topic = store.topicOf(sid);
    for (int guard = 0; guard < 2000; ++guard) {
      auto s = store.get(sid);
      if (s.complete()) break;
      if (s.phase == Phase::Summary)
        store.advance(sid, StudentEvent::say(topic.concepts[0].statement));
      else if (s.phase == Phase::ConceptMaps1 || s.phase == Phase::ConceptMaps2)
        store.advance(sid, StudentEvent::submit(json::object()));
      else if (s.phase == Phase::Cloze)
        store.advance(sid, StudentEvent::submit({{"answers", json::object()}}));
      else {
        auto q = pendingQuestion(s, topic);
        store.advance(sid, StudentEvent::say(q ? q->expectedAnswer : ""));
      }
    }
    finalState = store.get(sid);
    REQUIRE(finalState.complete());
    CHECK_THROWS_AS(store.advance(sid, StudentEvent::say("more")), Error);
    CHECK_THROWS_AS(store.advance("s999999", StudentEvent::say("x")), Error);
    CHECK(std::filesystem::exists(dir / "sessions" / (sid + ".jsonl")));
    CHECK_FALSE(store.studentModel("alice", "protein-function").perConcept.empty());
  }
  {
    SessionStore::Options o;
    o.dataDir = dir.string();
    SessionStore store(cur, tktest::resources(), o);
    CHECK(store.recover() >= 1);
    CHECK(stateHash(store.get(sid)) == stateHash(finalState));
    CHECK(store.studentModel("alice", "protein-function") == finalState.model);
    auto next = store.start("alice", "protein-function", 1);
    CHECK(next.state.sessionId != sid);
    for (const auto& [id, st] : finalState.model.perConcept)
      if (st.presumedCovered) CHECK(next.state.model.presumedCovered(id));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("second concurrent advance on one session gets Conflict") {
  std::promise<void> entered, release;
  auto enteredF = entered.get_future();
  auto releaseF = release.get_future().share();
  std::atomic<bool> first{true};
  SessionStore::Options o;
  o.inFlightHook = [&](const std::string&) {
    if (first.exchange(false)) {
      entered.set_value();
      releaseF.wait();
    }
  };
  SessionStore store(tktest::demo(), tktest::resources(), o);
  auto sid = store.start("carol", "protein-function", 3).state.sessionId;
  auto other = store.start("dave", "protein-function", 3).state.sessionId;
  auto worker = std::async(std::launch::async, [&] { return store.advance(sid, StudentEvent::say("")); });
  enteredF.wait();
  try {
    store.advance(sid, StudentEvent::say(""));
    FAIL("expected Conflict");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Conflict);
  }
  CHECK_NOTHROW(store.advance(other, StudentEvent::say("")));
  release.set_value();
  CHECK_NOTHROW(worker.get());
  CHECK_NOTHROW(store.advance(sid, StudentEvent::say("")));
}

TEST_CASE("persistPresumed off starts from a fresh model") {
  SessionStore::Options o;
  o.config.persistPresumed = false;
  SessionStore store(tktest::demo(), tktest::resources(), o);
  auto sid = store.start("erin", "protein-function", 1).state.sessionId;
  const auto& topic = store.topicOf(sid);
  for (int guard = 0; guard < 2000; ++guard) {
    auto s = store.get(sid);
    if (s.complete()) break;
    if (s.phase == Phase::Summary) {
      std::string all;
      for (const auto& c : topic.concepts) all += c.statement + " ";
      store.advance(sid, StudentEvent::say(all));
    } else if (s.phase == Phase::Cloze) {
      store.advance(sid, StudentEvent::submit({{"finish", true}}));
    } else if (s.phase == Phase::ConceptMaps1 || s.phase == Phase::ConceptMaps2) {
      store.advance(sid, StudentEvent::submit({{"skip", true}}));
    } else {
      store.advance(sid, StudentEvent::say("I don't know"));
    }
  }
  REQUIRE(store.get(sid).complete());
  auto next = store.start("erin", "protein-function", 2);
  for (const auto& c : topic.concepts) CHECK_FALSE(next.state.model.presumedCovered(c.id));
}

}
