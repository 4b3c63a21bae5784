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
#include "tutorkit/testbank.hpp"

using namespace tutorkit;
using namespace tutorkit::testbank;

namespace {

const ItemBank& bank() {
  static const ItemBank b = ItemBank::bundled();
  return b;
}

std::map<std::string, int> perTopic(const AssembledTest& t) {
  std::map<std::string, int> out;
  for (const auto& id : t.items) out[bank().find(id)->topicId]++;
  return out;
}

std::set<std::string> itemSet(const AssembledTest& t) { return {t.items.begin(), t.items.end()}; }

}  // namespace

TEST_SUITE("testbank") {

TEST_CASE("bundled bank shape and lint") {
  CHECK(bank().items().size() == 72);
  CHECK(bank().topics().size() == 4);
  int researcher = 0, standardized = 0;
  for (const auto& i : bank().items()) (i.source == ItemSource::Researcher ? researcher : standardized)++;
  CHECK(static_cast<double>(researcher) / standardized == doctest::Approx(2.0));
  CHECK(bank().lint().empty());
  std::vector<TestItem> skewed;
  for (const auto& i : bank().items())
    if (i.source == ItemSource::Researcher) skewed.push_back(i);
  CHECK_FALSE(ItemBank(skewed).lint().empty());
}

TEST_CASE("item json and duplicates") {
  const auto& i = bank().items()[0];
  CHECK(itemFromJson(itemToJson(i)) == i);
  CHECK_THROWS_AS(ItemBank({i, i}), Error);
  CHECK_THROWS_AS(ItemBank::fromJsonLines("{\"itemId\": 3}\n"), Error);
}

TEST_CASE("immediate tests split 6/6 and are disjoint across seeds") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto t = assembleImmediateTests(bank(), "protein-function", "enzyme-reactions", seed);
    REQUIRE(t.pre.items.size() == 12);
    REQUIRE(t.post.items.size() == 12);
    CHECK(t.pre.kind == analytics::TestKind::Pre);
    CHECK(t.post.kind == analytics::TestKind::Post);
    const auto a = perTopic(t.pre), b = perTopic(t.post);
    REQUIRE(a.at("protein-function") == 6);
    REQUIRE(a.at("enzyme-reactions") == 6);
    REQUIRE(b.at("protein-function") == 6);
    REQUIRE(b.at("enzyme-reactions") == 6);
    const auto pre = itemSet(t.pre), post = itemSet(t.post);
    REQUIRE(pre.size() == 12);
    std::vector<std::string> both;
    std::set_intersection(pre.begin(), pre.end(), post.begin(), post.end(), std::back_inserter(both));
    REQUIRE(both.empty());
  }
  CHECK(assembleImmediateTests(bank(), "protein-function", "enzyme-reactions", 1).pre.items !=
        assembleImmediateTests(bank(), "protein-function", "enzyme-reactions", 2).pre.items);
  CHECK_THROWS_AS(assembleImmediateTests(bank(), "protein-function", "protein-function", 1), Error);
  CHECK_THROWS_AS(assembleImmediateTests(bank(), "protein-function", "nope", 1), Error);
}

TEST_CASE("delayed tests split 24 seen and 24 new across seeds") {
  const std::vector<std::string> topics = bank().topics();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::set<std::string> seen;
    for (std::size_t k = 0; k < topics.size(); k += 2) {
      const auto t = assembleImmediateTests(bank(), topics[k], topics[k + 1], seed * 7 + k);
      seen.insert(t.pre.items.begin(), t.pre.items.end());
      seen.insert(t.post.items.begin(), t.post.items.end());
    }
    const auto d = assembleDelayedTest(bank(), topics, seen, seed);
    REQUIRE(d.items.size() == 48);
    REQUIRE(itemSet(d).size() == 48);
    std::size_t fromSeen = 0;
    for (const auto& id : d.items) fromSeen += seen.count(id);
    REQUIRE(fromSeen == 24);
    for (const auto& [topic, n] : perTopic(d)) CHECK(n == 12);
  }
  CHECK_THROWS_AS(assembleDelayedTest(bank(), {topics[0], topics[1]}, {}, 1), Error);
}

TEST_CASE("presented order is a per-student permutation and scoring maps back") {
  auto t = assembleImmediateTests(bank(), "protein-function", "lipid-structure", 5).pre;
  for (const auto& id : t.items) {
    auto o = presentedOrder(t, id);
    auto sorted = o;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::array<int, 4>{0, 1, 2, 3});
  }
  std::map<std::string, int> answers;
  for (std::size_t i = 0; i < t.items.size(); ++i) {
    const auto* item = bank().find(t.items[i]);
    const auto order = presentedOrder(t, t.items[i]);
    const int shown = static_cast<int>(std::find(order.begin(), order.end(), item->keyIndex) - order.begin());
    if (i < 8) answers[t.items[i]] = i < 5 ? shown : (shown + 1) % 4;
  }
  ScoreContext ctx{"p1", analytics::Condition::ITS, 1, 1};
  const auto s = scoreTest(t, bank(), answers, ctx);
  CHECK(s.correct == 5);
  CHECK(s.records.size() == 12);
  CHECK(s.unanswered.size() == 4);
  CHECK(s.proportion == doctest::Approx(5.0 / 12));
  for (const auto& r : s.records) {
    CHECK(r.participant == "p1");
    CHECK(r.test == analytics::TestKind::Pre);
  }
  CHECK_THROWS_AS(scoreTest(t, bank(), {{"unknown-item", 0}}, ctx), Error);
  CHECK_THROWS_AS(scoreTest(t, bank(), {{t.items[0], 4}}, ctx), Error);
}

TEST_CASE("assembled test json round trip") {
  auto t = assembleImmediateTests(bank(), "protein-function", "lipid-structure", 5).post;
  CHECK(testFromJson(testToJson(t)) == t);
}

}
