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
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "tutorkit/analytics.hpp"
#include "tutorkit/retrieval.hpp"
#include "tutorkit/session.hpp"
#include "tutorkit/simstudent.hpp"
#include "tutorkit/tasks.hpp"
#include "tutorkit/testbank.hpp"
#include "tutorkit/text.hpp"

using namespace tutorkit;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "exception: " << e.what() << "; ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%s %-22s %.2fs %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.str().c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

std::size_t dp(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
  return d[a.size()][b.size()];
}

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool has(const std::vector<std::string>& v, const std::string& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

int main() {
  const auto demoDir = tktest::demoCurriculumDir();
  const auto fixtureDir = tktest::fixtureCurriculumDir();

  criterion("or-to-d", [](Outcome& o) {
    const auto t0 = Clock::now();
    const std::vector<std::pair<double, double>> pairs = {{3.13, .71}, {2.90, .66}, {2.24, .50}, {2.04, .44},
                                                          {2.04, .45}, {2.11, .47}, {1.77, .36}, {1.86, .39},
                                                          {.56, -.35}, {.63, -.27}, {.62, -.30}};
    double worst = 0;
    for (auto [orv, d] : pairs) worst = std::max(worst, std::abs(analytics::orToD(orv) - d));
    o.require(worst <= 0.03, "pair outside tolerance");
    o.require(seconds(t0) < 1.0, "runtime");
    o.detail << pairs.size() << " pairs, max |err| " << worst;
  });

  criterion("session-structure", [&](Outcome& o) {
    auto timed = [&](const std::string& dir, const std::string& topic, const std::string& policy) {
      const auto t0 = Clock::now();
      auto r = simstudent::runEpisode(dir, topic, simstudent::Policy::parse(policy), 1);
      o.require(seconds(t0) < 10.0, policy + " runtime");
      return r;
    };
    auto ign = timed(demoDir, "protein-function", "ignorant");
    o.require(ign.roundsUsed == 2, "ignorant rounds");
    o.require(has(ign.phaseTrace, "Scaffolding1") && has(ign.phaseTrace, "Scaffolding2"), "ignorant phases");
    auto four = timed(demoDir, "protein-function", "summaryonly:4");
    o.require(four.roundsUsed == 1 && !has(four.phaseTrace, "Scaffolding2"), "summaryonly:4 rounds");
    auto third = timed(fixtureDir, "water-cycle", "summaryonly:1");
    o.require(std::abs(third.summaryRatio - 1.0 / 3) < 1e-12, "boundary ratio");
    o.require(third.roundsUsed == 2 && has(third.phaseTrace, "Scaffolding2"), "boundary rounds");
    o.detail << "ignorant " << ign.roundsUsed << ", summaryonly:4 " << four.roundsUsed << " (ratio "
             << four.summaryRatio << "), ratio 1/3 " << third.roundsUsed;
  });

  criterion("scaffold-cycles", [&](Outcome& o) {
    std::size_t perfectCycles = 0, ignorantCycles = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto p = simstudent::runEpisode(demoDir, "protein-function", simstudent::Policy::perfect(), seed);
      auto i = simstudent::runEpisode(demoDir, "protein-function", simstudent::Policy::ignorant(), seed);
      o.require(!p.cycles.empty() && !i.cycles.empty(), "no cycles");
      for (const auto& c : p.cycles) o.require(c.moves == std::vector<std::string>{"Prompt", "Feedback"}, "perfect");
      for (const auto& c : i.cycles)
        o.require(c.moves == std::vector<std::string>{"Prompt", "Feedback", "VQ", "Feedback"}, "ignorant");
      // Same shape seen from the transcript: questions asked per cycle.
      auto asked = [](const simstudent::EpisodeReport& r, char marker) {
        std::size_t n = 0;
        for (const auto& e : r.transcript)
          if (e.role == "tutor" && e.phase.rfind("Scaffolding", 0) == 0 && e.detail.at("question").is_string()) {
            const std::string id = e.detail["question"];
            n += id.find(std::string(".") + marker) != std::string::npos;
          }
        return n;
      };
      o.require(asked(p, 'p') == p.cycles.size() && asked(p, 'v') == 0, "perfect transcript");
      o.require(asked(i, 'p') == i.cycles.size() && asked(i, 'v') == i.cycles.size(), "ignorant transcript");
      perfectCycles += p.cycles.size();
      ignorantCycles += i.cycles.size();
    }
    o.detail << perfectCycles << " perfect cycles, " << ignorantCycles << " ignorant cycles";
  });

  criterion("turn-ratio", [&](Outcome& o) {
    auto r = simstudent::runEpisode(demoDir, "protein-function", simstudent::Policy::perfect(), 1);
    o.require(r.turnRatio >= 2.5 && r.turnRatio <= 3.5, "ratio");
    o.detail << r.lectureTutorTurns << ":" << r.lectureStudentTurns << " = " << r.turnRatio;
  });

  criterion("text-math", [](Outcome& o) {
    std::mt19937_64 g(1);
    for (int i = 0; i < 10000; ++i) {
      auto a = tktest::randomString(g, 12, "abcdefg"), b = tktest::randomString(g, 12, "abcdefg");
      if (text::editDistance(a, b) != dp(a, b)) {
        o.require(false, "editDistance " + a + "/" + b);
        break;
      }
    }
    const std::vector<std::string> words = {"protein", "enzyme", "amino", "acid",   "chain", "cell",  "blood",
                                            "oxygen",  "insulin", "signal", "shape", "heat", "muscle", "dna",
                                            "fold",    "germ",   "hormone", "acid", "ribosome", "collagen"};
    retrieval::DialogueBasis basis;
    for (int i = 0; i < 200; ++i) {
      std::string turn;
      for (int k = 0, n = 1 + static_cast<int>(g() % 6); k < n; ++k) turn += words[g() % words.size()] + " ";
      basis = basis.addTurn(turn);
    }
    double worst = 0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        worst = std::max(worst, std::abs(basis.gram(i, j) - (i == j ? 1.0 : 0.0)));
    o.require(worst < 1e-9, "gram");
    const text::Expectation e{"Enzymes speed up chemical reactions.", {"enzymes", "speed", "reactions"}};
    for (int i = 0; i < 2000; ++i) {
      std::string r;
      for (int k = 0, n = static_cast<int>(g() % 8); k < n; ++k) r += words[g() % words.size()] + (g() % 2 ? " " : ". ");
      if (g() % 2) r += "enzymes SPEED";
      const auto s = text::assess(r, e);
      o.require(s.value >= 0 && s.value <= 1 + 1e-12, "assess bounds");
      std::string up = r;
      for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      o.require(std::abs(text::assess(up + "!", e).value - s.value) < 1e-12, "case invariance");
      const double c = text::cosine(text::termVector(r), text::termVector(e.answerText));
      o.require(c >= 0 && c <= 1 + 1e-12, "cosine bounds");
    }
    o.detail << "10000 pairs, basis " << basis.size() << " vectors, gram err " << worst;
  });

  criterion("task-invariants", [](Outcome& o) {
    const auto& topic = tktest::demoTopic();
    std::vector<const curriculum::Concept*> cs;
    for (const auto& c : topic.concepts) cs.push_back(&c);
    std::multiset<std::string> input;
    for (auto* c : cs)
      for (const auto& t : c->triples) input.insert(t.subject + "|" + t.relation + "|" + t.object);
    std::size_t maps = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      std::multiset<std::string> out;
      for (const auto& m : tasks::generateSkeletonMaps(cs, seed)) {
        ++maps;
        o.require(!m.triples.empty() && m.triples.size() <= tasks::kMaxTriplesPerMap, "map size");
        for (const auto& t : m.triples) out.insert(t.subject + "|" + t.relation + "|" + t.object);
        std::multiset<std::string> nodes, edges;
        for (const auto& s : m.slots)
          if (s.blanked && !s.filled) (s.role == tasks::SlotRole::Node ? nodes : edges).insert(s.answer);
        o.require(nodes == std::multiset<std::string>(m.nodeBank.begin(), m.nodeBank.end()), "node bank");
        o.require(edges == std::multiset<std::string>(m.edgeBank.begin(), m.edgeBank.end()), "edge bank");
      }
      o.require(out == input, "triple partition");
    }
    std::size_t topics = 0;
    for (const auto& t : tktest::demo().topics) {
      const auto c = tasks::generateCloze(t.idealSummary);
      std::vector<std::string> keys;
      for (const auto& b : c.blanks) keys.push_back(b.key);
      o.require(c.fill(keys) == t.idealSummary.passage, "cloze " + t.id);
      ++topics;
    }
    o.detail << maps << " maps over 1000 seeds, " << topics << " cloze topic(s)";
  });

  criterion("test-assembly", [](Outcome& o) {
    const auto bank = testbank::ItemBank::bundled();
    const auto topics = bank.topics();
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      std::set<std::string> seen;
      for (std::size_t k = 0; k < topics.size(); k += 2) {
        const auto t = testbank::assembleImmediateTests(bank, topics[k], topics[k + 1], seed + 1000 * k);
        o.require(t.pre.items.size() == 12 && t.post.items.size() == 12, "immediate size");
        std::map<std::string, int> a, b;
        for (const auto& id : t.pre.items) a[bank.find(id)->topicId]++;
        for (const auto& id : t.post.items) b[bank.find(id)->topicId]++;
        o.require(a[topics[k]] == 6 && a[topics[k + 1]] == 6 && b[topics[k]] == 6 && b[topics[k + 1]] == 6,
                  "6/6 split");
        for (const auto& id : t.pre.items) o.require(!has(t.post.items, id), "pre/post overlap");
        seen.insert(t.pre.items.begin(), t.pre.items.end());
        seen.insert(t.post.items.begin(), t.post.items.end());
      }
      const auto d = testbank::assembleDelayedTest(bank, topics, seen, seed);
      std::size_t s = 0;
      for (const auto& id : d.items) s += seen.count(id);
      o.require(d.items.size() == 48 && std::set<std::string>(d.items.begin(), d.items.end()).size() == 48,
                "delayed size");
      o.require(s == 24, "24/24 split");
    }
    o.detail << "1000 seeds";
  });

  criterion("fit-logistic", [](Outcome& o) {
    std::mt19937_64 g(17);
    std::vector<analytics::ItemResponseRecord> recs;
    for (int i = 0; i < 500; ++i) {
      analytics::ItemResponseRecord r;
      r.participant = "p" + std::to_string(i % 50);
      r.item = "i" + std::to_string(i % 10);
      r.condition = i % 2 ? analytics::Condition::ITS : analytics::Condition::Class;
      const double p = r.condition == analytics::Condition::ITS ? 0.64 : 0.49;
      r.correct = std::uniform_real_distribution<double>(0, 1)(g) < p;
      recs.push_back(r);
    }
    double mean = 0;
    for (const auto& r : recs) mean += r.correct;
    mean /= recs.size();
    const auto f0 = analytics::fitLogistic(recs, "1");
    const double e0 = std::abs(f0.coefficients[0] - std::log(mean / (1 - mean)));
    o.require(e0 < 1e-6, "intercept-only");
    const auto design = analytics::buildDesign(recs, "condition");
    const auto f1 = analytics::fitLogistic(design);
    double best = -1e300, bx = 0, by = 0;
    for (double step : {0.01, 0.001, 0.0001}) {
      const double cx = bx, cy = by, span = step == 0.01 ? 3.0 : step * 20;
      for (double x = cx - span; x <= cx + span; x += step)
        for (double y = cy - span; y <= cy + span; y += step)
          if (double ll = analytics::logLikelihood(design, {x, y}); ll > best) {
            best = ll;
            bx = x;
            by = y;
          }
    }
    const double e1 = std::max(std::abs(f1.coefficients[0] - bx), std::abs(f1.coefficients[1] - by));
    o.require(e1 < 1e-3, "grid search");
    bool monotone = true;
    for (const char* formula : {"1", "condition", "condition*test"}) {
      const auto data = std::string(formula) == "condition*test"
                            ? analytics::syntheticRecords(analytics::studyTargets(), 10, 12, 5)
                            : recs;
      const auto f = analytics::fitLogistic(data, formula);
      for (std::size_t i = 1; i < f.logLikelihoodHistory.size(); ++i)
        monotone = monotone && f.logLikelihoodHistory[i] >= f.logLikelihoodHistory[i - 1] - 1e-12;
    }
    o.require(monotone, "monotone log-likelihood");
    o.detail << "intercept err " << e0 << ", grid err " << e1;
  });

  criterion("replay", [&](Outcome& o) {
    auto svc = simstudent::makeSimService(demoDir);
    std::mt19937_64 g(2026);
    const std::vector<std::string> policies = {"perfect", "ignorant", "noisy:0.2", "noisy:0.5", "noisy:0.8",
                                               "summaryonly:2", "summaryonly:4"};
    std::size_t episodes = 0;
    for (int i = 0; i < 50; ++i) {
      const auto policy = simstudent::Policy::parse(policies[g() % policies.size()]);
      auto r = simstudent::runEpisode(*svc, "protein-function", policy, g(), "student-" + std::to_string(i));
      const auto& store = svc->store();
      const auto replayed = session::replay(store.topicOf(r.sessionId), store.resources(), store.events(r.sessionId));
      o.require(session::stateHash(replayed) == r.stateHash, "hash mismatch " + r.sessionId);
      o.require(replayed == store.get(r.sessionId), "state mismatch " + r.sessionId);
      ++episodes;
    }
    o.detail << episodes << " episodes";
  });

  std::printf("%s\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return failures ? 1 : 0;
}
