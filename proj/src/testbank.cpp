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
#include "tutorkit/testbank.hpp"

#include <algorithm>
#include <sstream>

#include "tutorkit/error.hpp"
#include "tutorkit/resources.hpp"
#include "tutorkit/rng.hpp"

namespace tutorkit::testbank {

using analytics::TestKind;
using nlohmann::json;

std::string_view itemSourceName(ItemSource s) {
  return s == ItemSource::Researcher ? "Researcher" : "Standardized";
}

TestItem itemFromJson(const json& j) {
  auto fail = [&](const std::string& field, const std::string& why) {
    const bool named = j.is_object() && j.contains("itemId") && j["itemId"].is_string();
    throw Error(ErrorCode::SchemaViolation, "item " + (named ? j["itemId"].get<std::string>() : "?") + ": " + why,
                field);
  };
  if (!j.is_object()) fail("item", "not an object");
  TestItem it;
  for (const char* f : {"itemId", "topicId", "stem", "source"})
    if (!j.contains(f) || !j[f].is_string() || j[f].get<std::string>().empty()) fail(f, "missing or empty");
  it.itemId = j["itemId"].get<std::string>();
  it.topicId = j["topicId"].get<std::string>();
  it.stem = j["stem"].get<std::string>();
  const std::string src = j["source"].get<std::string>();
  if (src == "Researcher")
    it.source = ItemSource::Researcher;
  else if (src == "Standardized")
    it.source = ItemSource::Standardized;
  else
    fail("source", "unknown source " + src);
  if (!j.contains("options") || !j["options"].is_array() || j["options"].size() != 4)
    fail("options", "exactly 4 options required");
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j["options"][i].is_string()) fail("options", "options must be text");
    it.options[i] = j["options"][i].get<std::string>();
  }
  if (!j.contains("keyIndex") || !j["keyIndex"].is_number_integer()) fail("keyIndex", "missing");
  it.keyIndex = j["keyIndex"].get<int>();
  if (it.keyIndex < 0 || it.keyIndex > 3) fail("keyIndex", "must be 0-3");
  return it;
}

json itemToJson(const TestItem& it) {
  return {{"itemId", it.itemId}, {"topicId", it.topicId}, {"stem", it.stem},
          {"options", it.options}, {"keyIndex", it.keyIndex}, {"source", itemSourceName(it.source)}};
}

ItemBank::ItemBank(std::vector<TestItem> items) : items_(std::move(items)) {
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (!index_.emplace(items_[i].itemId, i).second)
      throw Error(ErrorCode::SchemaViolation, "duplicate item id " + items_[i].itemId, "itemId");
}

ItemBank ItemBank::fromJsonLines(const std::string& contents) {
  std::vector<TestItem> items;
  std::istringstream in(contents);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(n) + " is not JSON", "itembank");
    items.push_back(itemFromJson(j));
  }
  return ItemBank(std::move(items));
}

ItemBank ItemBank::fromFile(const std::string& path) { return fromJsonLines(readTextFile(path)); }

ItemBank ItemBank::bundled() { return fromFile(resourcePath("itembank.jsonl")); }

const TestItem* ItemBank::find(const std::string& itemId) const {
  auto it = index_.find(itemId);
  return it == index_.end() ? nullptr : &items_[it->second];
}

std::vector<const TestItem*> ItemBank::forTopic(const std::string& topicId) const {
  std::vector<const TestItem*> out;
  for (const auto& it : items_)
    if (it.topicId == topicId) out.push_back(&it);
  return out;
}

std::vector<std::string> ItemBank::topics() const {
  std::vector<std::string> out;
  for (const auto& it : items_)
    if (std::find(out.begin(), out.end(), it.topicId) == out.end()) out.push_back(it.topicId);
  return out;
}

std::vector<std::string> ItemBank::lint() const {
  std::vector<std::string> warnings;
  auto check = [&](const std::string& scope, const std::vector<const TestItem*>& items) {
    std::size_t r = 0, s = 0;
    for (const auto* it : items) (it->source == ItemSource::Researcher ? r : s)++;
    if (s == 0 || static_cast<double>(r) / static_cast<double>(s) < 1.5 ||
        static_cast<double>(r) / static_cast<double>(s) > 2.5)
      warnings.push_back(scope + ": researcher:standardized is " + std::to_string(r) + ":" + std::to_string(s) +
                         ", expected about 2:1");
  };
  std::vector<const TestItem*> all;
  for (const auto& it : items_) all.push_back(&it);
  check("bank", all);
  for (const auto& t : topics()) check(t, forTopic(t));
  return warnings;
}

json testToJson(const AssembledTest& t) {
  return {{"testId", t.testId}, {"kind", analytics::testKindName(t.kind)}, {"items", t.items},
          {"perStudentOrderSeed", t.perStudentOrderSeed}};
}

AssembledTest testFromJson(const json& j) {
  AssembledTest t;
  t.testId = j.at("testId").get<std::string>();
  auto kind = analytics::testKindFromName(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::SchemaViolation, "unknown test kind", "kind");
  t.kind = *kind;
  t.items = j.at("items").get<std::vector<std::string>>();
  t.perStudentOrderSeed = j.at("perStudentOrderSeed").get<std::uint64_t>();
  return t;
}

namespace {

std::string hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 15];
  return out;
}

std::vector<std::string> shuffledIds(const std::vector<const TestItem*>& items, Rng& rng) {
  std::vector<std::string> ids;
  for (const auto* it : items) ids.push_back(it->itemId);
  rng.shuffle(std::span<std::string>(ids));
  return ids;
}

[[noreturn]] void insufficient(const std::string& topic, std::size_t have, std::size_t need) {
  throw Error(ErrorCode::InsufficientItems,
              "topic " + topic + " has " + std::to_string(have) + " items, needs " + std::to_string(need), topic);
}

}  // namespace

ImmediateTests assembleImmediateTests(const ItemBank& bank, const std::string& tutoredTopic,
                                      const std::string& untutoredTopic, std::uint64_t seed) {
  if (tutoredTopic == untutoredTopic)
    throw Error(ErrorCode::InvalidArgument, "tutored and untutored topics must differ", "untutoredTopic");
  Rng rng(mixSeed(seed, 1));
  ImmediateTests out;
  out.pre.kind = TestKind::Pre;
  out.post.kind = TestKind::Post;
  for (const std::string& topic : {tutoredTopic, untutoredTopic}) {
    auto items = bank.forTopic(topic);
    if (items.size() < 2 * kImmediateItemsPerTopic) insufficient(topic, items.size(), 2 * kImmediateItemsPerTopic);
    auto ids = shuffledIds(items, rng);
    out.pre.items.insert(out.pre.items.end(), ids.begin(), ids.begin() + kImmediateItemsPerTopic);
    out.post.items.insert(out.post.items.end(), ids.begin() + kImmediateItemsPerTopic,
                          ids.begin() + 2 * kImmediateItemsPerTopic);
  }
  rng.shuffle(std::span<std::string>(out.pre.items));
  rng.shuffle(std::span<std::string>(out.post.items));
  out.pre.perStudentOrderSeed = rng.next();
  out.post.perStudentOrderSeed = rng.next();
  out.pre.testId = "pre-" + hex(seed);
  out.post.testId = "post-" + hex(seed);
  return out;
}

AssembledTest assembleDelayedTest(const ItemBank& bank, const std::vector<std::string>& cycleTopics,
                                  const std::set<std::string>& seenItemIds, std::uint64_t seed) {
  std::set<std::string> distinct(cycleTopics.begin(), cycleTopics.end());
  if (cycleTopics.size() != kDelayedTopics || distinct.size() != kDelayedTopics)
    throw Error(ErrorCode::InvalidArgument, "delayed test needs exactly 4 distinct topics", "cycleTopics");
  const std::size_t perTopic = kDelayedItemsPerTopic;
  const std::size_t seenTotal = kDelayedTopics * perTopic / 2;

  struct Pools {
    std::vector<const TestItem*> seen, fresh;
    std::size_t lo = 0, hi = 0, take = 0;
  };
  std::vector<Pools> pools(kDelayedTopics);
  std::size_t seenAvailable = 0, sumLo = 0, sumHi = 0;
  for (std::size_t t = 0; t < kDelayedTopics; ++t) {
    for (const auto* it : bank.forTopic(cycleTopics[t]))
      (seenItemIds.count(it->itemId) ? pools[t].seen : pools[t].fresh).push_back(it);
    Pools& p = pools[t];
    if (p.seen.size() + p.fresh.size() < perTopic) insufficient(cycleTopics[t], p.seen.size() + p.fresh.size(), perTopic);
    p.lo = perTopic > p.fresh.size() ? perTopic - p.fresh.size() : 0;
    p.hi = std::min(perTopic, p.seen.size());
    seenAvailable += p.seen.size();
    sumLo += p.lo;
    sumHi += p.hi;
  }
  if (sumHi < seenTotal)
    throw Error(ErrorCode::InsufficientItems,
                "seen pool supports " + std::to_string(sumHi) + " items, needs " + std::to_string(seenTotal) +
                    " (" + std::to_string(seenAvailable) + " seen in total)",
                "seen");
  if (sumLo > seenTotal)
    throw Error(ErrorCode::InsufficientItems,
                "new pool supports " + std::to_string(kDelayedTopics * perTopic - sumLo) + " items, needs " +
                    std::to_string(seenTotal),
                "new");

  // Start at each topic's floor, then raise the topic furthest below an even
  // split until the seen quota is met.
  std::size_t assigned = 0;
  for (auto& p : pools) {
    p.take = p.lo;
    assigned += p.take;
  }
  while (assigned < seenTotal) {
    Pools* best = nullptr;
    for (auto& p : pools)
      if (p.take < p.hi && (!best || p.take < best->take)) best = &p;
    best->take++;
    assigned++;
  }

  Rng rng(mixSeed(seed, 2));
  AssembledTest test;
  test.kind = TestKind::Delayed;
  for (auto& p : pools) {
    auto seen = shuffledIds(p.seen, rng);
    auto fresh = shuffledIds(p.fresh, rng);
    test.items.insert(test.items.end(), seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(p.take));
    test.items.insert(test.items.end(), fresh.begin(),
                      fresh.begin() + static_cast<std::ptrdiff_t>(perTopic - p.take));
  }
  rng.shuffle(std::span<std::string>(test.items));
  test.perStudentOrderSeed = rng.next();
  test.testId = "delayed-" + hex(seed);
  return test;
}

std::array<int, 4> presentedOrder(const AssembledTest& test, const std::string& itemId) {
  std::array<int, 4> order{0, 1, 2, 3};
  if (test.kind == TestKind::Delayed) {
    Rng rng(mixSeed(test.perStudentOrderSeed, fnv1a(itemId)));
    rng.shuffle(std::span<int>(order));
  }
  return order;
}

ScoredTest scoreTest(const AssembledTest& test, const ItemBank& bank, const std::map<std::string, int>& answers,
                     const ScoreContext& context) {
  for (const auto& [id, choice] : answers) {
    if (std::find(test.items.begin(), test.items.end(), id) == test.items.end())
      throw Error(ErrorCode::UnknownItem, "item " + id + " is not on test " + test.testId, id);
    if (choice < 0 || choice > 3) throw Error(ErrorCode::OutOfRange, "choice for " + id + " outside 0-3", id);
  }
  ScoredTest out;
  for (const auto& id : test.items) {
    const TestItem* item = bank.find(id);
    if (!item) throw Error(ErrorCode::UnknownItem, "item " + id + " is not in the bank", id);
    analytics::ItemResponseRecord r{context.participant, id, context.condition, test.kind, false,
                                    context.week, context.cycle};
    auto a = answers.find(id);
    if (a == answers.end()) {
      out.unanswered.push_back(id);
    } else {
      r.correct = presentedOrder(test, id)[static_cast<std::size_t>(a->second)] == item->keyIndex;
    }
    out.correct += r.correct ? 1 : 0;
    out.records.push_back(std::move(r));
  }
  out.proportion = test.items.empty() ? 0.0
                                      : static_cast<double>(out.correct) / static_cast<double>(test.items.size());
  return out;
}

}  // namespace tutorkit::testbank
