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
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tutorkit/curriculum.hpp"

namespace tutorkit::tasks {

inline constexpr double kSummaryThreshold = 0.6;
inline constexpr std::size_t kMaxTriplesPerMap = 4;

// ---- Student summary ----

struct SummaryResult {
  std::vector<std::string> coveredConceptIds;  // curriculum order
  std::map<std::string, double> scores;        // per concept, this summary only
  double ratio = 0.0;
  int rounds = 2;
};

// Two rounds iff covered / total <= 1/3, computed in integers.
int roundsFor(std::size_t covered, std::size_t total);

// A concept counts as covered when the summary assesses at or above the
// threshold against it, or when it is already in presumedCovered.
SummaryResult gradeSummary(const std::string& summary, const curriculum::Topic& topic,
                           const std::set<std::string>& presumedCovered,
                           double threshold = kSummaryThreshold);

// ---- Skeleton concept maps ----

enum class SlotRole { Node, Edge };

std::string_view slotRoleName(SlotRole role);

struct MapSlot {
  std::string slotId;
  SlotRole role = SlotRole::Node;
  std::string answer;
  bool blanked = false;
  bool filled = false;

  bool operator==(const MapSlot&) const = default;
};

// Triple endpoints refer to node slots by index; relations to edge slots.
struct MapLink {
  std::size_t subjectSlot = 0;
  std::size_t edgeSlot = 0;
  std::size_t objectSlot = 0;

  bool operator==(const MapLink&) const = default;
};

struct SkeletonMap {
  std::string mapId;
  std::string conceptId;
  std::vector<curriculum::ConceptTriple> triples;
  std::vector<MapSlot> slots;
  std::vector<MapLink> links;
  std::vector<std::string> nodeBank;  // sorted
  std::vector<std::string> edgeBank;  // sorted

  const MapSlot* findSlot(const std::string& slotId) const;
  bool complete() const;
  std::size_t bankSize() const { return nodeBank.size() + edgeBank.size(); }

  bool operator==(const SkeletonMap&) const = default;
};

// Triples of each concept, in curriculum order, chunked into maps of at most
// four. Returns [] when the concepts carry no triples at all.
std::vector<SkeletonMap> generateSkeletonMaps(const std::vector<const curriculum::Concept*>& concepts,
                                              std::uint64_t seed);

struct MapEntryResult {
  bool accepted = false;
  std::optional<std::string> bankEntryRemoved;
  bool complete = false;
};

// Throws UnknownSlot (absent or not blanked) or SlotAlreadyFilled.
MapEntryResult gradeMapEntry(SkeletonMap& map, const std::string& slotId, const std::string& typed);

// Whole-phrase comparison: token-wise normalization, then exact or one edit
// for answers of five or more characters.
bool phraseMatches(const std::string& typed, const std::string& answer);

nlohmann::json skeletonMapToJson(const SkeletonMap& map);
SkeletonMap skeletonMapFromJson(const nlohmann::json& j);
// Student-facing form: blanked, unfilled slots carry no label.
nlohmann::json skeletonMapClientJson(const SkeletonMap& map);

// ---- Cloze ----

inline constexpr const char* kBlankMarker = "____";

struct ClozeBlank {
  std::string blankId;
  std::string conceptId;
  std::string key;

  bool operator==(const ClozeBlank&) const = default;
};

struct ClozePassage {
  std::vector<std::string> segments;  // blanks.size() + 1 pieces around the blanks
  std::vector<ClozeBlank> blanks;     // passage order

  // Passage with each blank rendered as the marker followed by [blankId].
  std::string rendered() const;
  // Segments interleaved with the given fills, in blank order.
  std::string fill(const std::vector<std::string>& fills) const;

  bool operator==(const ClozePassage&) const = default;
};

// Throws NoSpans.
ClozePassage generateCloze(const curriculum::IdealSummary& ideal);

// Missing responses score as empty. Throws UnknownBlank.
std::map<std::string, double> gradeCloze(const ClozePassage& passage,
                                         const std::map<std::string, std::string>& responses);

nlohmann::json clozeToJson(const ClozePassage& passage);
ClozePassage clozeFromJson(const nlohmann::json& j);
nlohmann::json clozeClientJson(const ClozePassage& passage);

}  // namespace tutorkit::tasks
