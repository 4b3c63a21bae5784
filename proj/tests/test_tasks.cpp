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
#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "tutorkit/error.hpp"
#include "tutorkit/tasks.hpp"

using namespace tutorkit;
using namespace tutorkit::tasks;

namespace {

std::vector<const curriculum::Concept*> allConcepts(const curriculum::Topic& t) {
  std::vector<const curriculum::Concept*> out;
  for (const auto& c : t.concepts) out.push_back(&c);
  return out;
}

using TripleKey = std::tuple<std::string, std::string, std::string>;

std::multiset<TripleKey> tripleSet(const std::vector<curriculum::ConceptTriple>& ts) {
  std::multiset<TripleKey> out;
  for (const auto& t : ts) out.insert({t.subject, t.relation, t.object});
  return out;
}

// |bank entries| per role equals |open blanks| per role.
void checkConservation(const SkeletonMap& m) {
  std::multiset<std::string> openNodes, openEdges;
  for (const auto& s : m.slots)
    if (s.blanked && !s.filled) (s.role == SlotRole::Node ? openNodes : openEdges).insert(s.answer);
  CHECK(std::multiset<std::string>(m.nodeBank.begin(), m.nodeBank.end()) == openNodes);
  CHECK(std::multiset<std::string>(m.edgeBank.begin(), m.edgeBank.end()) == openEdges);
}

}  // namespace

TEST_SUITE("tasks") {

TEST_CASE("rounds are two exactly up to one third") {
  CHECK(roundsFor(0, 11) == 2);
  CHECK(roundsFor(3, 11) == 2);
  CHECK(roundsFor(4, 11) == 1);
  CHECK(roundsFor(1, 3) == 2);
  CHECK(roundsFor(3, 9) == 2);
  CHECK(roundsFor(4, 12) == 2);
  CHECK(roundsFor(5, 12) == 1);
  CHECK(roundsFor(11, 11) == 1);
  for (std::size_t n = 1; n <= 60; ++n)
    for (std::size_t k = 0; k <= n; ++k) CHECK(roundsFor(k, n) == (3 * k <= n ? 2 : 1));
}

TEST_CASE("summary of every subset of statements covers that subset") {
  const auto& t = tktest::demoTopic();
  const std::size_t n = t.concepts.size();
  REQUIRE(n == 11);
  std::size_t exact = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::string summary;
    std::set<std::string> expected;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        summary += t.concepts[i].statement + " ";
        expected.insert(t.concepts[i].id);
      }
    const auto r = gradeSummary(summary, t, {});
    std::set<std::string> got(r.coveredConceptIds.begin(), r.coveredConceptIds.end());
    const bool superset = std::includes(got.begin(), got.end(), expected.begin(), expected.end());
    REQUIRE(superset);
    exact += got == expected;
    REQUIRE(r.rounds == roundsFor(got.size(), n));
    REQUIRE(r.ratio == doctest::Approx(static_cast<double>(got.size()) / n));
  }
  CHECK(exact == (1u << n));
}

TEST_CASE("blank summary covers only presumed concepts") {
  const auto& t = tktest::demoTopic();
  auto r = gradeSummary("   ", t, {"pf2"});
  CHECK(r.coveredConceptIds == std::vector<std::string>{"pf2"});
  CHECK(r.rounds == 2);
  CHECK(gradeSummary("I don't know", t, {}).coveredConceptIds.empty());
}

TEST_CASE("skeleton maps: partition, size bound and conservation over seeds") {
  const auto& t = tktest::demoTopic();
  const auto concepts = allConcepts(t);
  std::vector<curriculum::ConceptTriple> input;
  for (auto* c : concepts) input.insert(input.end(), c->triples.begin(), c->triples.end());
  std::set<std::string> distinctLayouts;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto maps = generateSkeletonMaps(concepts, seed);
    std::vector<curriculum::ConceptTriple> out;
    std::string layout;
    for (const auto& m : maps) {
      REQUIRE(!m.triples.empty());
      REQUIRE(m.triples.size() <= kMaxTriplesPerMap);
      out.insert(out.end(), m.triples.begin(), m.triples.end());
      checkConservation(m);
      std::size_t blanks = 0;
      for (const auto& s : m.slots) blanks += s.blanked;
      CHECK(blanks >= 1);
      CHECK(std::is_sorted(m.nodeBank.begin(), m.nodeBank.end()));
      for (const auto& s : m.slots) layout += s.blanked ? '1' : '0';
    }
    REQUIRE(tripleSet(out) == tripleSet(input));
    distinctLayouts.insert(layout);
  }
  CHECK(distinctLayouts.size() > 1);
  CHECK(generateSkeletonMaps(concepts, 42) == generateSkeletonMaps(concepts, 42));
}

TEST_CASE("map entry grading keeps the bank consistent") {
  const auto& t = tktest::demoTopic();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (auto m : generateSkeletonMaps(allConcepts(t), seed)) {
      const MapSlot* open = nullptr;
      for (const auto& s : m.slots)
        if (s.blanked && !s.filled) open = &s;
      REQUIRE(open);
      const std::string id = open->slotId, answer = open->answer;
      const auto before = m.bankSize();
      auto miss = gradeMapEntry(m, id, "zzzz qqqq");
      CHECK_FALSE(miss.accepted);
      CHECK(m.bankSize() == before);
      auto hit = gradeMapEntry(m, id, answer);
      CHECK(hit.accepted);
      CHECK(hit.bankEntryRemoved == answer);
      CHECK(m.bankSize() == before - 1);
      checkConservation(m);
      CHECK_THROWS_AS(gradeMapEntry(m, id, answer), Error);
      CHECK_THROWS_AS(gradeMapEntry(m, "map99.n1", answer), Error);
      while (!m.complete()) {
        for (const auto& s : m.slots)
          if (s.blanked && !s.filled) {
            const std::string sid = s.slotId, sa = s.answer;
            auto r = gradeMapEntry(m, sid, sa);
            CHECK(r.accepted);
            break;
          }
      }
      CHECK(m.bankSize() == 0);
    }
  }
}

TEST_CASE("no triples means no maps") {
  auto c = tktest::demoTopic().concepts[0];
  c.triples.clear();
  CHECK(generateSkeletonMaps({&c}, 1).empty());
}

TEST_CASE("map client json hides open answers") {
  const auto maps = generateSkeletonMaps(allConcepts(tktest::demoTopic()), 3);
  for (const auto& m : maps) {
    const auto j = skeletonMapClientJson(m);
    const auto dumped = j.dump();
    CHECK(dumped.find("\"answer\"") == std::string::npos);
    for (const auto& s : j.at("slots"))
      if (s.at("open").get<bool>()) CHECK(s.at("label").is_null());
    CHECK(skeletonMapFromJson(skeletonMapToJson(m)) == m);
  }
}

TEST_CASE("phrase matching tolerates case and small typos") {
  CHECK(phraseMatches("Amino Acids", "amino acids"));
  CHECK(phraseMatches("amino acidss", "amino acids"));
  CHECK_FALSE(phraseMatches("amino", "amino acids"));
}

TEST_CASE("cloze reconstruction is byte identical for every authored topic") {
  for (const auto* cur : {&tktest::demo(), &tktest::fixture()})
    for (const auto& t : cur->topics) {
      const auto c = generateCloze(t.idealSummary);
      REQUIRE(c.segments.size() == c.blanks.size() + 1);
      std::vector<std::string> keys;
      for (const auto& b : c.blanks) keys.push_back(b.key);
      CHECK(c.fill(keys) == t.idealSummary.passage);
      CHECK(c.blanks.size() == t.idealSummary.conceptSpans.size());
      CHECK(clozeFromJson(clozeToJson(c)) == c);
      const auto client = clozeClientJson(c).dump();
      for (const auto& b : c.blanks) CHECK(client.find("\"" + b.key + "\"") == std::string::npos);
    }
}

TEST_CASE("cloze grading") {
  const auto c = generateCloze(tktest::demoTopic().idealSummary);
  std::map<std::string, std::string> answers;
  for (const auto& b : c.blanks) answers[b.blankId] = b.key;
  auto s = gradeCloze(c, answers);
  for (const auto& b : c.blanks) CHECK(s.at(b.blankId) == doctest::Approx(1.0));
  answers.erase(c.blanks[0].blankId);
  answers[c.blanks[1].blankId] = "wrong words";
  s = gradeCloze(c, answers);
  CHECK(s.at(c.blanks[0].blankId) < 0.6);
  CHECK(s.at(c.blanks[1].blankId) < 0.6);
  CHECK_THROWS_AS(gradeCloze(c, {{"b999", "x"}}), Error);
  curriculum::IdealSummary empty{"no spans here", {}};
  CHECK_THROWS_AS(generateCloze(empty), Error);
}

}
