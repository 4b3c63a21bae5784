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
#include "tutorkit/tasks.hpp"

#include <algorithm>

#include "tutorkit/error.hpp"
#include "tutorkit/rng.hpp"
#include "tutorkit/text.hpp"

namespace tutorkit::tasks {

using nlohmann::json;

int roundsFor(std::size_t covered, std::size_t total) { return 3 * covered <= total ? 2 : 1; }

SummaryResult gradeSummary(const std::string& summary, const curriculum::Topic& topic,
                           const std::set<std::string>& presumedCovered, double threshold) {
  SummaryResult out;
  const bool blank = text::tokenize(summary).empty();
  for (const auto& c : topic.concepts) {
    double score = 0.0;
    if (!blank) score = text::assess(summary, {c.statement, c.keywords}).value;
    out.scores[c.id] = score;
    if (score >= threshold || presumedCovered.count(c.id)) out.coveredConceptIds.push_back(c.id);
  }
  const std::size_t n = topic.concepts.size();
  out.ratio = n ? static_cast<double>(out.coveredConceptIds.size()) / static_cast<double>(n) : 0.0;
  out.rounds = roundsFor(out.coveredConceptIds.size(), n);
  return out;
}

// ---- Skeleton maps ----

std::string_view slotRoleName(SlotRole role) { return role == SlotRole::Node ? "node" : "edge"; }

const MapSlot* SkeletonMap::findSlot(const std::string& slotId) const {
  for (const auto& s : slots)
    if (s.slotId == slotId) return &s;
  return nullptr;
}

bool SkeletonMap::complete() const {
  return std::all_of(slots.begin(), slots.end(),
                     [](const MapSlot& s) { return !s.blanked || s.filled; });
}

namespace {

std::string phraseKey(const std::string& s) {
  std::string out;
  for (const auto& t : text::tokenize(s, text::StopwordList{})) {
    if (!out.empty()) out.push_back(' ');
    out += t.normalized;
  }
  return out;
}

SkeletonMap buildMap(std::string mapId, const std::string& conceptId,
                     std::vector<curriculum::ConceptTriple> triples, Rng& rng) {
  SkeletonMap map;
  map.mapId = std::move(mapId);
  map.conceptId = conceptId;
  map.triples = std::move(triples);

  std::map<std::string, std::size_t> nodeIndex;
  std::size_t nodes = 0, edges = 0;
  auto node = [&](const std::string& label) {
    auto it = nodeIndex.find(label);
    if (it != nodeIndex.end()) return it->second;
    map.slots.push_back({map.mapId + ".n" + std::to_string(++nodes), SlotRole::Node, label});
    nodeIndex[label] = map.slots.size() - 1;
    return map.slots.size() - 1;
  };
  for (const auto& t : map.triples) {
    MapLink link;
    link.subjectSlot = node(t.subject);
    map.slots.push_back({map.mapId + ".e" + std::to_string(++edges), SlotRole::Edge, t.relation});
    link.edgeSlot = map.slots.size() - 1;
    link.objectSlot = node(t.object);
    map.links.push_back(link);
  }

  bool any = false;
  while (!any) {
    for (auto& s : map.slots) {
      s.blanked = rng.bernoulli(0.5);
      any = any || s.blanked;
    }
  }
  for (const auto& s : map.slots) {
    if (!s.blanked) continue;
    (s.role == SlotRole::Node ? map.nodeBank : map.edgeBank).push_back(s.answer);
  }
  std::sort(map.nodeBank.begin(), map.nodeBank.end());
  std::sort(map.edgeBank.begin(), map.edgeBank.end());
  return map;
}

}  // namespace

std::vector<SkeletonMap> generateSkeletonMaps(const std::vector<const curriculum::Concept*>& concepts,
                                              std::uint64_t seed) {
  std::vector<SkeletonMap> maps;
  Rng rng(seed);
  for (const curriculum::Concept* c : concepts) {
    const auto& all = c->triples;
    for (std::size_t i = 0; i < all.size(); i += kMaxTriplesPerMap) {
      std::size_t end = std::min(all.size(), i + kMaxTriplesPerMap);
      maps.push_back(buildMap("map" + std::to_string(maps.size() + 1), c->id,
                              {all.begin() + static_cast<std::ptrdiff_t>(i),
                               all.begin() + static_cast<std::ptrdiff_t>(end)},
                              rng));
    }
  }
  return maps;
}

bool phraseMatches(const std::string& typed, const std::string& answer) {
  return text::fuzzyWordMatch(phraseKey(typed), phraseKey(answer));
}

MapEntryResult gradeMapEntry(SkeletonMap& map, const std::string& slotId, const std::string& typed) {
  auto it = std::find_if(map.slots.begin(), map.slots.end(),
                         [&](const MapSlot& s) { return s.slotId == slotId; });
  if (it == map.slots.end() || !it->blanked)
    throw Error(ErrorCode::UnknownSlot, "no blank slot " + slotId, slotId);
  if (it->filled) throw Error(ErrorCode::SlotAlreadyFilled, "slot already filled: " + slotId, slotId);

  MapEntryResult out;
  if (phraseMatches(typed, it->answer)) {
    it->filled = true;
    out.accepted = true;
    auto& bank = it->role == SlotRole::Node ? map.nodeBank : map.edgeBank;
    auto b = std::find(bank.begin(), bank.end(), it->answer);
    if (b != bank.end()) {
      out.bankEntryRemoved = *b;
      bank.erase(b);
    }
  }
  out.complete = map.complete();
  return out;
}

json skeletonMapToJson(const SkeletonMap& map) {
  json triples = json::array(), slots = json::array(), links = json::array();
  for (const auto& t : map.triples)
    triples.push_back({{"subject", t.subject}, {"relation", t.relation}, {"object", t.object}});
  for (const auto& s : map.slots)
    slots.push_back({{"slotId", s.slotId},
                     {"role", slotRoleName(s.role)},
                     {"answer", s.answer},
                     {"blanked", s.blanked},
                     {"filled", s.filled}});
  for (const auto& l : map.links)
    links.push_back({l.subjectSlot, l.edgeSlot, l.objectSlot});
  return {{"mapId", map.mapId},   {"conceptId", map.conceptId}, {"triples", triples},
          {"slots", slots},       {"links", links},             {"nodeBank", map.nodeBank},
          {"edgeBank", map.edgeBank}};
}

SkeletonMap skeletonMapFromJson(const json& j) {
  SkeletonMap m;
  m.mapId = j.at("mapId").get<std::string>();
  m.conceptId = j.at("conceptId").get<std::string>();
  for (const auto& t : j.at("triples"))
    m.triples.push_back({t.at("subject").get<std::string>(), t.at("relation").get<std::string>(),
                         t.at("object").get<std::string>()});
  for (const auto& s : j.at("slots"))
    m.slots.push_back({s.at("slotId").get<std::string>(),
                       s.at("role").get<std::string>() == "edge" ? SlotRole::Edge : SlotRole::Node,
                       s.at("answer").get<std::string>(), s.at("blanked").get<bool>(),
                       s.at("filled").get<bool>()});
  for (const auto& l : j.at("links"))
    m.links.push_back({l.at(0).get<std::size_t>(), l.at(1).get<std::size_t>(),
                       l.at(2).get<std::size_t>()});
  m.nodeBank = j.at("nodeBank").get<std::vector<std::string>>();
  m.edgeBank = j.at("edgeBank").get<std::vector<std::string>>();
  return m;
}

json skeletonMapClientJson(const SkeletonMap& map) {
  json slots = json::array(), links = json::array();
  for (const auto& s : map.slots) {
    json o{{"slotId", s.slotId}, {"role", slotRoleName(s.role)}, {"open", s.blanked && !s.filled}};
    o["label"] = (s.blanked && !s.filled) ? json(nullptr) : json(s.answer);
    slots.push_back(std::move(o));
  }
  for (const auto& l : map.links)
    links.push_back({{"subject", map.slots[l.subjectSlot].slotId},
                     {"relation", map.slots[l.edgeSlot].slotId},
                     {"object", map.slots[l.objectSlot].slotId}});
  return {{"type", "conceptMap"}, {"mapId", map.mapId},       {"slots", slots},
          {"links", links},       {"nodeBank", map.nodeBank}, {"edgeBank", map.edgeBank}};
}

// ---- Cloze ----

std::string ClozePassage::rendered() const {
  std::string out = segments.empty() ? std::string() : segments.front();
  for (std::size_t i = 0; i < blanks.size(); ++i)
    out += std::string(kBlankMarker) + "[" + blanks[i].blankId + "]" + segments[i + 1];
  return out;
}

std::string ClozePassage::fill(const std::vector<std::string>& fills) const {
  if (fills.size() != blanks.size())
    throw Error(ErrorCode::InvalidArgument, "fill count does not match blank count");
  std::string out = segments.front();
  for (std::size_t i = 0; i < blanks.size(); ++i) out += fills[i] + segments[i + 1];
  return out;
}

ClozePassage generateCloze(const curriculum::IdealSummary& ideal) {
  if (ideal.conceptSpans.empty()) throw Error(ErrorCode::NoSpans, "ideal summary has no spans");
  std::vector<curriculum::ConceptSpan> spans = ideal.conceptSpans;
  std::stable_sort(spans.begin(), spans.end(),
                   [](const auto& a, const auto& b) { return a.start < b.start; });
  ClozePassage out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.start < pos || s.end > ideal.passage.size() || s.end <= s.start)
      throw Error(ErrorCode::OutOfRange, "span outside passage for " + s.conceptId, "conceptSpans");
    out.segments.push_back(ideal.passage.substr(pos, s.start - pos));
    out.blanks.push_back({"b" + std::to_string(i + 1), s.conceptId,
                          ideal.passage.substr(s.start, s.end - s.start)});
    pos = s.end;
  }
  out.segments.push_back(ideal.passage.substr(pos));
  return out;
}

std::map<std::string, double> gradeCloze(const ClozePassage& passage,
                                         const std::map<std::string, std::string>& responses) {
  for (const auto& [id, _] : responses) {
    bool known = std::any_of(passage.blanks.begin(), passage.blanks.end(),
                             [&](const ClozeBlank& b) { return b.blankId == id; });
    if (!known) throw Error(ErrorCode::UnknownBlank, "unknown blank " + id, id);
  }
  std::map<std::string, double> scores;
  for (const auto& b : passage.blanks) {
    auto it = responses.find(b.blankId);
    const std::string response = it == responses.end() ? std::string() : it->second;
    std::vector<std::string> keywords = text::contentKeywords(b.key);
    if (keywords.empty())
      for (const auto& t : text::tokenize(b.key, text::StopwordList{})) keywords.push_back(t.normalized);
    scores[b.blankId] = text::assess(response, {b.key, keywords}).value;
  }
  return scores;
}

json clozeToJson(const ClozePassage& p) {
  json blanks = json::array();
  for (const auto& b : p.blanks)
    blanks.push_back({{"blankId", b.blankId}, {"conceptId", b.conceptId}, {"key", b.key}});
  return {{"segments", p.segments}, {"blanks", blanks}};
}

ClozePassage clozeFromJson(const json& j) {
  ClozePassage p;
  p.segments = j.at("segments").get<std::vector<std::string>>();
  for (const auto& b : j.at("blanks"))
    p.blanks.push_back({b.at("blankId").get<std::string>(), b.at("conceptId").get<std::string>(),
                        b.at("key").get<std::string>()});
  return p;
}

json clozeClientJson(const ClozePassage& p) {
  json ids = json::array();
  for (const auto& b : p.blanks) ids.push_back(b.blankId);
  return {{"type", "cloze"}, {"passage", p.rendered()}, {"segments", p.segments}, {"blankIds", ids}};
}

}  // namespace tutorkit::tasks
