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
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "tutorkit/curriculum.hpp"
#include "tutorkit/error.hpp"
#include "tutorkit/json_schema.hpp"

using namespace tutorkit;
using nlohmann::json;

namespace {

json demoDoc() { return curriculum::topicToJson(tktest::demoTopic()); }

bool hasRule(const std::vector<curriculum::Violation>& v, const std::string& field, const std::string& rule) {
  for (const auto& x : v)
    if (x.field == field && x.rule == rule) return true;
  return false;
}

}  // namespace

TEST_SUITE("curriculum") {

TEST_CASE("bundled curriculum loads and validates clean") {
  const auto& cur = tktest::demo();
  REQUIRE(cur.topics.size() >= 1);
  for (const auto& t : cur.topics) CHECK(curriculum::validateTopic(t).empty());
  CHECK(tktest::demoTopic().concepts.size() == 11);
  for (const auto& t : tktest::fixture().topics) CHECK(curriculum::validateTopic(t).empty());
}

TEST_CASE("serialize then load is identity") {
  auto dir = tktest::scratchDir("roundtrip");
  for (const auto& t : tktest::demo().topics) curriculum::writeTopic(t, (dir / (t.id + ".json")).string());
  auto again = curriculum::loadCurriculum(dir.string());
  REQUIRE(again.topics.size() == tktest::demo().topics.size());
  for (std::size_t i = 0; i < again.topics.size(); ++i) {
    const auto& orig = tktest::demo().topic(again.topics[i].id);
    CHECK(again.topics[i] == orig);
  }
  CHECK(curriculum::parseTopic(demoDoc()) == tktest::demoTopic());
  std::filesystem::remove_all(dir);
}

TEST_CASE("every concept reference resolves to exactly one concept") {
  for (const auto& t : tktest::demo().topics) {
    std::multiset<std::string> ids;
    for (const auto& c : t.concepts) ids.insert(c.id);
    for (const auto& s : t.lectureScript) CHECK(ids.count(s.conceptId) == 1);
    for (const auto& s : t.idealSummary.conceptSpans) CHECK(ids.count(s.conceptId) == 1);
  }
}

TEST_CASE("schema violations are reported") {
  auto doc = demoDoc();
  doc.erase("concepts");
  CHECK_FALSE(jsonschema::validate(curriculum::topicSchema(), doc).empty());
  CHECK_THROWS_AS(curriculum::parseTopic(doc), Error);

  auto bad = demoDoc();
  bad["concepts"][0]["keywords"] = json::array();
  try {
    curriculum::parseTopic(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::SchemaViolation || e.code() == ErrorCode::EmptyKeywordList));
  }
}

TEST_CASE("semantic checks catch dangling references") {
  auto t = tktest::demoTopic();
  t.concepts[0].mediaRefs.push_back("nope");
  t.lectureScript[0].conceptId = "ghost";
  t.concepts[1].keywords = {"xylophone"};
  auto v = curriculum::validateTopic(t);
  CHECK(hasRule(v, "mediaRefs", "dangling"));
  CHECK(hasRule(v, "lectureScript", "dangling"));
  CHECK(hasRule(v, "keywords", "subset-of-statement"));
}

TEST_CASE("loader rejects missing directories and duplicate topics") {
  CHECK_THROWS_AS(curriculum::loadCurriculum("/nonexistent/curriculum"), Error);
  auto dir = tktest::scratchDir("dup");
  curriculum::writeTopic(tktest::demoTopic(), (dir / "a.json").string());
  curriculum::writeTopic(tktest::demoTopic(), (dir / "b.json").string());
  CHECK_THROWS_AS(curriculum::loadCurriculum(dir.string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("lookup helpers") {
  const auto& t = tktest::demoTopic();
  CHECK(t.findConcept("pf1") != nullptr);
  CHECK(t.findConcept("zz") == nullptr);
  CHECK_THROWS_AS(t.conceptById("zz"), Error);
  CHECK(t.findQuestion("pf1.p1") != nullptr);
  CHECK(t.findQuestion("lec1.q") != nullptr);
  CHECK_THROWS_AS(tktest::demo().topic("nope"), Error);
  CHECK(curriculum::yesNoClass("Yes") == curriculum::YesNo::Yes);
  CHECK(curriculum::yesNoClass("no.") == curriculum::YesNo::No);
  CHECK_FALSE(curriculum::yesNoClass("amino acids"));
}

TEST_CASE("json schema subset validator") {
  const json schema = json::parse(R"({"type":"object","required":["a"],"properties":{
      "a":{"type":"array","minItems":1,"items":{"type":"string","minLength":1}},
      "b":{"type":"integer","minimum":0},"c":{"enum":["x","y"]}},"additionalProperties":false})");
  CHECK(jsonschema::validate(schema, json::parse(R"({"a":["q"],"b":2,"c":"x"})")).empty());
  CHECK_FALSE(jsonschema::validate(schema, json::parse(R"({"a":[]})")).empty());
  CHECK_FALSE(jsonschema::validate(schema, json::parse(R"({"a":[""]})")).empty());
  CHECK_FALSE(jsonschema::validate(schema, json::parse(R"({"a":["q"],"b":-1})")).empty());
  CHECK_FALSE(jsonschema::validate(schema, json::parse(R"({"a":["q"],"c":"z"})")).empty());
  CHECK_FALSE(jsonschema::validate(schema, json::parse(R"({"a":["q"],"extra":1})")).empty());
  auto errs = jsonschema::validate(schema, json::parse(R"({"a":[1]})"));
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].path == "/a/0");
}

}
