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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tutorkit::curriculum {

enum class QuestionKind { ConceptCompletion, Verification, ComprehensionGauging, Prompt };

std::string_view questionKindName(QuestionKind kind);
std::optional<QuestionKind> questionKindFromName(std::string_view name);

struct QuestionTemplate {
  std::string id;
  QuestionKind kind = QuestionKind::Prompt;
  std::string text;
  std::string expectedAnswer;
  std::string conceptId;
  // Position in curriculum order, assigned by the loader; not serialized.
  int ordinal = 0;

  bool operator==(const QuestionTemplate&) const = default;
};

// "yes" / "no" for verification questions, normalized.
enum class YesNo { Yes, No };
std::optional<YesNo> yesNoClass(std::string_view answer);

struct ConceptTriple {
  std::string subject;
  std::string relation;
  std::string object;

  bool operator==(const ConceptTriple&) const = default;
};

struct MediaAsset {
  std::string id;
  std::string uri;
  std::string caption;

  bool operator==(const MediaAsset&) const = default;
};

// Byte offsets into the passage, half open.
struct ConceptSpan {
  std::string conceptId;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string keyTerm;

  bool operator==(const ConceptSpan&) const = default;
};

struct IdealSummary {
  std::string passage;
  std::vector<ConceptSpan> conceptSpans;

  bool operator==(const IdealSummary&) const = default;
};

struct Concept {
  std::string id;
  std::string statement;
  std::string focus;  // preview phrase; empty falls back to the topic name
  std::vector<std::string> keywords;
  std::vector<ConceptTriple> triples;
  std::vector<QuestionTemplate> prompts;
  std::vector<QuestionTemplate> verificationQuestions;
  std::vector<std::string> mediaRefs;

  bool operator==(const Concept&) const = default;
};

struct LectureSegment {
  std::string text;
  std::vector<std::string> reveals;

  bool operator==(const LectureSegment&) const = default;
};

// One block of the collaborative lecture: tutor content followed by exactly
// one student response slot.
struct LectureStep {
  std::string id;
  std::string conceptId;
  std::vector<LectureSegment> segments;
  QuestionTemplate question;

  bool operator==(const LectureStep&) const = default;
};

struct Topic {
  std::string id;
  std::string name;
  std::string preview;
  std::vector<Concept> concepts;
  IdealSummary idealSummary;
  std::vector<LectureStep> lectureScript;
  std::vector<MediaAsset> mediaAssets;

  const Concept* findConcept(std::string_view conceptId) const;
  const Concept& conceptById(std::string_view conceptId) const;  // throws DanglingReference
  std::optional<std::size_t> conceptIndex(std::string_view conceptId) const;
  const QuestionTemplate* findQuestion(std::string_view questionId) const;
  bool hasMedia(std::string_view mediaId) const;

  bool operator==(const Topic&) const = default;
};

struct CurriculumStandard {
  std::string id;
  std::string description;
  std::vector<std::string> topics;

  bool operator==(const CurriculumStandard&) const = default;
};

struct Curriculum {
  std::vector<Topic> topics;
  std::vector<CurriculumStandard> standards;

  const Topic* findTopic(std::string_view topicId) const;
  const Topic& topic(std::string_view topicId) const;  // throws UnknownTopic
};

struct Violation {
  std::string field;
  std::string rule;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validateTopic(const Topic& topic);

// Recomputes question conceptIds and ordinals from the topic layout.
void assignQuestionOrder(Topic& topic);

nlohmann::json topicToJson(const Topic& topic);
// Schema-checked parse of one topic document. Throws SchemaViolation or
// DanglingReference; does not run validateTopic.
Topic topicFromJson(const nlohmann::json& doc);
// Full check: schema, references, then validateTopic.
Topic parseTopic(const nlohmann::json& doc);

const nlohmann::json& topicSchema();

// Every *.json in the directory is a topic document, except an optional
// _standards.json listing curriculum standards. Throws MissingFile,
// SchemaViolation or DanglingReference.
Curriculum loadCurriculum(const std::string& directory);

void writeTopic(const Topic& topic, const std::string& path);

}  // namespace tutorkit::curriculum
