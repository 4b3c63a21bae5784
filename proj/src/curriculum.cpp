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
#include "tutorkit/curriculum.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>

#include "tutorkit/error.hpp"
#include "tutorkit/json_schema.hpp"
#include "tutorkit/resources.hpp"
#include "tutorkit/text.hpp"

namespace tutorkit::curriculum {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view questionKindName(QuestionKind kind) {
  switch (kind) {
    case QuestionKind::ConceptCompletion: return "ConceptCompletion";
    case QuestionKind::Verification: return "Verification";
    case QuestionKind::ComprehensionGauging: return "ComprehensionGauging";
    case QuestionKind::Prompt: return "Prompt";
  }
  return "Prompt";
}

std::optional<QuestionKind> questionKindFromName(std::string_view name) {
  for (auto k : {QuestionKind::ConceptCompletion, QuestionKind::Verification,
                 QuestionKind::ComprehensionGauging, QuestionKind::Prompt})
    if (questionKindName(k) == name) return k;
  return std::nullopt;
}

std::optional<YesNo> yesNoClass(std::string_view answer) {
  std::string n = text::normalize(answer);
  if (n == "yes") return YesNo::Yes;
  if (n == "no") return YesNo::No;
  return std::nullopt;
}

const Concept* Topic::findConcept(std::string_view conceptId) const {
  for (const auto& c : concepts)
    if (c.id == conceptId) return &c;
  return nullptr;
}

const Concept& Topic::conceptById(std::string_view conceptId) const {
  if (const Concept* c = findConcept(conceptId)) return *c;
  throw Error(ErrorCode::DanglingReference, "unknown concept " + std::string(conceptId),
              std::string(conceptId));
}

std::optional<std::size_t> Topic::conceptIndex(std::string_view conceptId) const {
  for (std::size_t i = 0; i < concepts.size(); ++i)
    if (concepts[i].id == conceptId) return i;
  return std::nullopt;
}

const QuestionTemplate* Topic::findQuestion(std::string_view questionId) const {
  for (const auto& c : concepts) {
    for (const auto& q : c.prompts)
      if (q.id == questionId) return &q;
    for (const auto& q : c.verificationQuestions)
      if (q.id == questionId) return &q;
  }
  for (const auto& step : lectureScript)
    if (step.question.id == questionId) return &step.question;
  return nullptr;
}

bool Topic::hasMedia(std::string_view mediaId) const {
  return std::any_of(mediaAssets.begin(), mediaAssets.end(),
                     [&](const MediaAsset& m) { return m.id == mediaId; });
}

const Topic* Curriculum::findTopic(std::string_view topicId) const {
  for (const auto& t : topics)
    if (t.id == topicId) return &t;
  return nullptr;
}

const Topic& Curriculum::topic(std::string_view topicId) const {
  if (const Topic* t = findTopic(topicId)) return *t;
  throw Error(ErrorCode::UnknownTopic, "unknown topic " + std::string(topicId),
              std::string(topicId));
}

namespace {

void checkQuestion(const QuestionTemplate& q, const std::string& field,
                   std::vector<Violation>& out) {
  if (q.kind == QuestionKind::Verification) {
    if (!yesNoClass(q.expectedAnswer))
      out.push_back({field + ".expectedAnswer", "yes-no-class", q.id});
  } else if (text::normalize(q.expectedAnswer).empty()) {
    out.push_back({field + ".expectedAnswer", "non-empty", q.id});
  }
}

}  // namespace

std::vector<Violation> validateTopic(const Topic& topic) {
  std::vector<Violation> out;
  if (topic.concepts.empty()) out.push_back({"concepts", "non-empty", topic.id});

  std::set<std::string> conceptIds, questionIds, mediaIds;
  for (const auto& m : topic.mediaAssets)
    if (!mediaIds.insert(m.id).second) out.push_back({"mediaAssets", "unique-id", m.id});

  auto noteQuestionId = [&](const QuestionTemplate& q) {
    if (!questionIds.insert(q.id).second) out.push_back({"questions", "unique-id", q.id});
  };

  for (const auto& c : topic.concepts) {
    if (!conceptIds.insert(c.id).second) out.push_back({"concepts", "unique-id", c.id});
    if (text::normalize(c.statement).empty()) out.push_back({"statement", "non-empty", c.id});
    if (c.keywords.empty()) {
      out.push_back({"keywords", "non-empty", c.id});
    } else {
      std::set<std::string> statementTokens;
      for (const auto& t : text::tokenize(c.statement, text::StopwordList{}))
        statementTokens.insert(t.normalized);
      for (const auto& k : c.keywords)
        if (!statementTokens.count(text::normalize(k)))
          out.push_back({"keywords", "subset-of-statement", c.id + ":" + k});
    }
    for (const auto& t : c.triples)
      if (t.subject.empty() || t.relation.empty() || t.object.empty())
        out.push_back({"triples", "non-empty-fields", c.id});
    if (c.prompts.empty()) out.push_back({"prompts", "non-empty", c.id});
    if (c.verificationQuestions.empty())
      out.push_back({"verificationQuestions", "non-empty", c.id});
    for (const auto& q : c.prompts) {
      noteQuestionId(q);
      if (q.kind != QuestionKind::Prompt) out.push_back({"prompts", "kind", q.id});
      checkQuestion(q, "prompts", out);
    }
    for (const auto& q : c.verificationQuestions) {
      noteQuestionId(q);
      if (q.kind != QuestionKind::Verification)
        out.push_back({"verificationQuestions", "kind", q.id});
      checkQuestion(q, "verificationQuestions", out);
    }
    for (const auto& m : c.mediaRefs)
      if (!mediaIds.count(m)) out.push_back({"mediaRefs", "dangling", m});
  }

  std::set<std::string> stepIds;
  for (const auto& step : topic.lectureScript) {
    if (!stepIds.insert(step.id).second) out.push_back({"lectureScript", "unique-id", step.id});
    if (!conceptIds.count(step.conceptId))
      out.push_back({"lectureScript", "dangling", step.conceptId});
    if (step.segments.empty()) out.push_back({"lectureScript.segments", "non-empty", step.id});
    for (const auto& seg : step.segments)
      for (const auto& r : seg.reveals)
        if (!mediaIds.count(r)) out.push_back({"lectureScript.reveals", "dangling", r});
    noteQuestionId(step.question);
    if (step.question.kind == QuestionKind::Prompt)
      out.push_back({"lectureScript.question", "kind", step.question.id});
    checkQuestion(step.question, "lectureScript.question", out);
  }

  const auto& summary = topic.idealSummary;
  std::vector<const ConceptSpan*> spans;
  std::map<std::string, int> spanCount;
  for (const auto& s : summary.conceptSpans) {
    spanCount[s.conceptId]++;
    if (s.end < s.start || s.end > summary.passage.size() || s.start == s.end) {
      out.push_back({"conceptSpans", "bounds", s.conceptId});
      continue;
    }
    if (summary.passage.compare(s.start, s.end - s.start, s.keyTerm) != 0)
      out.push_back({"conceptSpans", "key-term", s.conceptId});
    spans.push_back(&s);
  }
  std::sort(spans.begin(), spans.end(),
            [](const ConceptSpan* a, const ConceptSpan* b) { return a->start < b->start; });
  for (std::size_t i = 1; i < spans.size(); ++i)
    if (spans[i]->start < spans[i - 1]->end)
      out.push_back({"conceptSpans", "overlap", spans[i]->conceptId});
  for (const auto& c : topic.concepts)
    if (spanCount[c.id] != 1) out.push_back({"conceptSpans", "coverage", c.id});
  for (const auto& [id, _] : spanCount)
    if (!conceptIds.count(id)) out.push_back({"conceptSpans", "dangling", id});

  return out;
}

void assignQuestionOrder(Topic& topic) {
  int ordinal = 0;
  for (auto& c : topic.concepts) {
    for (auto& q : c.prompts) {
      q.conceptId = c.id;
      q.ordinal = ordinal++;
    }
    for (auto& q : c.verificationQuestions) {
      q.conceptId = c.id;
      q.ordinal = ordinal++;
    }
  }
  for (auto& step : topic.lectureScript) {
    step.question.conceptId = step.conceptId;
    step.question.ordinal = ordinal++;
  }
}

namespace {

json questionToJson(const QuestionTemplate& q) {
  return json{{"id", q.id},
              {"kind", questionKindName(q.kind)},
              {"text", q.text},
              {"expectedAnswer", q.expectedAnswer}};
}

QuestionTemplate questionFromJson(const json& j) {
  QuestionTemplate q;
  q.id = j.at("id").get<std::string>();
  q.kind = *questionKindFromName(j.at("kind").get<std::string>());
  q.text = j.at("text").get<std::string>();
  q.expectedAnswer = j.at("expectedAnswer").get<std::string>();
  return q;
}

std::string topicIdOf(const json& doc) {
  if (doc.is_object() && doc.contains("id") && doc["id"].is_string())
    return doc["id"].get<std::string>();
  return "?";
}

}  // namespace

json topicToJson(const Topic& topic) {
  json concepts = json::array();
  for (const auto& c : topic.concepts) {
    json triples = json::array();
    for (const auto& t : c.triples)
      triples.push_back({{"subject", t.subject}, {"relation", t.relation}, {"object", t.object}});
    json prompts = json::array(), vqs = json::array();
    for (const auto& q : c.prompts) prompts.push_back(questionToJson(q));
    for (const auto& q : c.verificationQuestions) vqs.push_back(questionToJson(q));
    json cj{{"id", c.id},
            {"statement", c.statement},
            {"keywords", c.keywords},
            {"triples", triples},
            {"prompts", prompts},
            {"verificationQuestions", vqs},
            {"mediaRefs", c.mediaRefs}};
    if (!c.focus.empty()) cj["focus"] = c.focus;
    concepts.push_back(std::move(cj));
  }
  json spans = json::array();
  for (const auto& s : topic.idealSummary.conceptSpans)
    spans.push_back(
        {{"conceptId", s.conceptId}, {"start", s.start}, {"end", s.end}, {"keyTerm", s.keyTerm}});
  json script = json::array();
  for (const auto& step : topic.lectureScript) {
    json segments = json::array();
    for (const auto& seg : step.segments) {
      json sj{{"text", seg.text}};
      if (!seg.reveals.empty()) sj["reveals"] = seg.reveals;
      segments.push_back(std::move(sj));
    }
    script.push_back({{"id", step.id},
                      {"conceptId", step.conceptId},
                      {"segments", segments},
                      {"question", questionToJson(step.question)}});
  }
  json media = json::array();
  for (const auto& m : topic.mediaAssets)
    media.push_back({{"id", m.id}, {"uri", m.uri}, {"caption", m.caption}});
  return json{{"id", topic.id},
              {"name", topic.name},
              {"preview", topic.preview},
              {"concepts", concepts},
              {"idealSummary",
               {{"passage", topic.idealSummary.passage}, {"conceptSpans", spans}}},
              {"lectureScript", script},
              {"mediaAssets", media}};
}

const json& topicSchema() {
  static std::once_flag once;
  static json schema;
  std::call_once(once, [] {
    schema = json::parse(readTextFile(resourcePath("schema/topic.schema.json")));
  });
  return schema;
}

Topic topicFromJson(const json& doc) {
  const std::string topicId = topicIdOf(doc);
  auto errors = jsonschema::validate(topicSchema(), doc);
  if (!errors.empty()) {
    const auto& e = errors.front();
    throw Error(ErrorCode::SchemaViolation,
                "topic " + topicId + ": " + e.path + " violates " + e.rule + " (" + e.message + ")",
                e.path);
  }

  Topic t;
  t.id = doc["id"].get<std::string>();
  t.name = doc["name"].get<std::string>();
  t.preview = doc["preview"].get<std::string>();
  for (const auto& cj : doc["concepts"]) {
    Concept c;
    c.id = cj["id"].get<std::string>();
    c.statement = cj["statement"].get<std::string>();
    c.focus = cj.value("focus", std::string{});
    c.keywords = cj["keywords"].get<std::vector<std::string>>();
    for (const auto& tj : cj["triples"])
      c.triples.push_back({tj["subject"].get<std::string>(), tj["relation"].get<std::string>(),
                           tj["object"].get<std::string>()});
    for (const auto& q : cj["prompts"]) c.prompts.push_back(questionFromJson(q));
    for (const auto& q : cj["verificationQuestions"])
      c.verificationQuestions.push_back(questionFromJson(q));
    c.mediaRefs = cj["mediaRefs"].get<std::vector<std::string>>();
    t.concepts.push_back(std::move(c));
  }
  t.idealSummary.passage = doc["idealSummary"]["passage"].get<std::string>();
  for (const auto& sj : doc["idealSummary"]["conceptSpans"])
    t.idealSummary.conceptSpans.push_back({sj["conceptId"].get<std::string>(),
                                           sj["start"].get<std::size_t>(),
                                           sj["end"].get<std::size_t>(),
                                           sj["keyTerm"].get<std::string>()});
  for (const auto& stepJ : doc["lectureScript"]) {
    LectureStep step;
    step.id = stepJ["id"].get<std::string>();
    step.conceptId = stepJ["conceptId"].get<std::string>();
    for (const auto& segJ : stepJ["segments"])
      step.segments.push_back(
          {segJ["text"].get<std::string>(),
           segJ.value("reveals", std::vector<std::string>{})});
    step.question = questionFromJson(stepJ["question"]);
    t.lectureScript.push_back(std::move(step));
  }
  for (const auto& mj : doc["mediaAssets"])
    t.mediaAssets.push_back({mj["id"].get<std::string>(), mj["uri"].get<std::string>(),
                             mj["caption"].get<std::string>()});
  assignQuestionOrder(t);
  return t;
}

Topic parseTopic(const json& doc) {
  Topic t = topicFromJson(doc);

  auto dangling = [&](const std::string& id) {
    throw Error(ErrorCode::DanglingReference,
                "topic " + t.id + " references unknown id " + id, id);
  };
  for (const auto& step : t.lectureScript) {
    if (!t.findConcept(step.conceptId)) dangling(step.conceptId);
    for (const auto& seg : step.segments)
      for (const auto& r : seg.reveals)
        if (!t.hasMedia(r)) dangling(r);
  }
  for (const auto& c : t.concepts)
    for (const auto& m : c.mediaRefs)
      if (!t.hasMedia(m)) dangling(m);
  for (const auto& s : t.idealSummary.conceptSpans)
    if (!t.findConcept(s.conceptId)) dangling(s.conceptId);

  auto violations = validateTopic(t);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorCode::SchemaViolation,
                "topic " + t.id + ": " + v.field + " violates " + v.rule + " (" + v.detail + ")",
                v.field);
  }
  return t;
}

Curriculum loadCurriculum(const std::string& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec))
    throw Error(ErrorCode::MissingFile, "curriculum directory not found: " + directory, directory);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  Curriculum cur;
  std::set<std::string> topicIds;
  std::optional<fs::path> standardsFile;
  for (const auto& path : files) {
    if (path.filename() == "_standards.json") {
      standardsFile = path;
      continue;
    }
    json doc;
    try {
      doc = json::parse(readTextFile(path.string()));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what(), path.string());
    }
    Topic t = parseTopic(doc);
    if (!topicIds.insert(t.id).second)
      throw Error(ErrorCode::SchemaViolation, "duplicate topic id " + t.id, "id");
    cur.topics.push_back(std::move(t));
  }

  if (standardsFile) {
    json doc = json::parse(readTextFile(standardsFile->string()));
    for (const auto& sj : doc.at("standards")) {
      CurriculumStandard s;
      s.id = sj.at("id").get<std::string>();
      s.description = sj.at("description").get<std::string>();
      s.topics = sj.at("topics").get<std::vector<std::string>>();
      if (text::normalize(s.description).empty())
        throw Error(ErrorCode::SchemaViolation, "standard " + s.id + " has no description",
                    "description");
      std::set<std::string> seen;
      for (const auto& tid : s.topics) {
        if (!seen.insert(tid).second)
          throw Error(ErrorCode::SchemaViolation, "standard " + s.id + " repeats topic " + tid,
                      "topics");
        if (!topicIds.count(tid))
          throw Error(ErrorCode::DanglingReference, "standard " + s.id + " cites " + tid, tid);
      }
      cur.standards.push_back(std::move(s));
    }
  }
  return cur;
}

void writeTopic(const Topic& topic, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path, path);
  out << topicToJson(topic).dump(2) << '\n';
}

}  // namespace tutorkit::curriculum
