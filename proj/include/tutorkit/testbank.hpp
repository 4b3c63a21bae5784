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

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tutorkit/analytics.hpp"

namespace tutorkit::testbank {

enum class ItemSource { Researcher, Standardized };

std::string_view itemSourceName(ItemSource s);

struct TestItem {
  std::string itemId;
  std::string topicId;
  std::string stem;
  std::array<std::string, 4> options;
  int keyIndex = 0;
  ItemSource source = ItemSource::Researcher;

  bool operator==(const TestItem&) const = default;
};

class ItemBank {
 public:
  ItemBank() = default;
  explicit ItemBank(std::vector<TestItem> items);  // throws SchemaViolation on duplicates

  // One JSON object per line. Throws MissingFile or SchemaViolation.
  static ItemBank fromFile(const std::string& path);
  static ItemBank fromJsonLines(const std::string& contents);
  static ItemBank bundled();

  const std::vector<TestItem>& items() const { return items_; }
  const TestItem* find(const std::string& itemId) const;
  std::vector<const TestItem*> forTopic(const std::string& topicId) const;
  std::vector<std::string> topics() const;

  // Researcher : Standardized count ratio; warnings when it strays far from
  // 2:1 for the bank or any topic.
  std::vector<std::string> lint() const;

 private:
  std::vector<TestItem> items_;
  std::map<std::string, std::size_t> index_;
};

TestItem itemFromJson(const nlohmann::json& j);
nlohmann::json itemToJson(const TestItem& item);

struct AssembledTest {
  std::string testId;
  analytics::TestKind kind = analytics::TestKind::Pre;
  std::vector<std::string> items;
  std::uint64_t perStudentOrderSeed = 0;

  bool operator==(const AssembledTest&) const = default;
};

nlohmann::json testToJson(const AssembledTest& t);
AssembledTest testFromJson(const nlohmann::json& j);

inline constexpr std::size_t kImmediateItemsPerTopic = 6;
inline constexpr std::size_t kDelayedItemsPerTopic = 12;
inline constexpr std::size_t kDelayedTopics = 4;

struct ImmediateTests {
  AssembledTest pre;
  AssembledTest post;
};

// Throws InsufficientItems when a topic has fewer than 12 items.
ImmediateTests assembleImmediateTests(const ItemBank& bank, const std::string& tutoredTopic,
                                      const std::string& untutoredTopic, std::uint64_t seed);

// 12 items per topic, 24 previously seen and 24 new overall. Throws
// InsufficientItems or InvalidArgument (not exactly four distinct topics).
AssembledTest assembleDelayedTest(const ItemBank& bank, const std::vector<std::string>& cycleTopics,
                                  const std::set<std::string>& seenItemIds, std::uint64_t seed);

// Presented option order for an item: identity on immediate tests, a seeded
// per-item shuffle on delayed ones. presented[i] is the bank index shown at
// position i.
std::array<int, 4> presentedOrder(const AssembledTest& test, const std::string& itemId);

struct ScoreContext {
  std::string participant;
  analytics::Condition condition = analytics::Condition::ITS;
  int week = 0;
  int cycle = 0;
};

struct ScoredTest {
  std::vector<analytics::ItemResponseRecord> records;  // test order
  std::vector<std::string> unanswered;
  std::size_t correct = 0;
  double proportion = 0.0;
};

// answers maps itemId to the chosen presented position. Throws UnknownItem
// and OutOfRange.
ScoredTest scoreTest(const AssembledTest& test, const ItemBank& bank, const std::map<std::string, int>& answers,
                     const ScoreContext& context);

}  // namespace tutorkit::testbank
