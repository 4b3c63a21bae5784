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
#include "tutorkit/speechact.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tutorkit/error.hpp"
#include "tutorkit/resources.hpp"

namespace tutorkit::speechact {

namespace {

constexpr std::array<std::pair<Kind, std::string_view>, 7> kNames{{
    {Kind::Answer, "Answer"},
    {Kind::MetacognitiveDeficit, "MetacognitiveDeficit"},
    {Kind::RepeatRequest, "RepeatRequest"},
    {Kind::ClarificationQuestion, "ClarificationQuestion"},
    {Kind::Affirmation, "Affirmation"},
    {Kind::Negation, "Negation"},
    {Kind::Other, "Other"},
}};

const std::set<std::string, std::less<>> kInterrogatives{
    "what", "why", "how", "who", "where", "when", "which", "whats", "hows",
    "is", "are", "does", "do", "can", "could", "would", "will", "did", "should"};
const std::set<std::string, std::less<>> kAssent{
    "yes", "yeah", "yep", "yup", "sure", "ok", "okay", "right", "correct", "true", "uhhuh"};
const std::set<std::string, std::less<>> kDissent{
    "no", "nope", "nah", "not", "never", "false", "wrong", "incorrect"};
const std::set<std::string, std::less<>> kNegators{
    "no", "not", "dont", "cant", "never", "didnt", "doesnt", "isnt", "nothing"};

}  // namespace

std::string_view kindName(Kind kind) {
  for (const auto& [k, n] : kNames)
    if (k == kind) return n;
  return "Other";
}

std::optional<Kind> kindFromName(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

int priority(Kind kind) {
  switch (kind) {
    case Kind::MetacognitiveDeficit: return 0;
    case Kind::RepeatRequest: return 1;
    case Kind::ClarificationQuestion: return 2;
    case Kind::Negation: return 3;
    case Kind::Affirmation: return 4;
    case Kind::Answer: return 5;
    case Kind::Other: return 6;
  }
  return 7;
}

std::string normalizeUtterance(std::string_view utterance) {
  std::string out;
  for (const auto& t : text::tokenize(utterance, text::StopwordList{})) {
    if (!out.empty()) out.push_back(' ');
    out += t.normalized;
  }
  return out;
}

std::vector<PatternRule> parsePatterns(std::string_view contents) {
  std::vector<PatternRule> rules;
  std::istringstream in{std::string(contents)};
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::SchemaViolation,
                  "pattern line " + std::to_string(lineNo) + " has no tab", "patterns");
    auto kind = kindFromName(line.substr(0, tab));
    if (!kind)
      throw Error(ErrorCode::SchemaViolation,
                  "unknown speech act kind on line " + std::to_string(lineNo), "patterns");
    std::string source = line.substr(tab + 1);
    try {
      rules.push_back(PatternRule{*kind, source, std::regex(source, std::regex::ECMAScript)});
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::SchemaViolation,
                  "bad regex on line " + std::to_string(lineNo) + ": " + e.what(), "patterns");
    }
  }
  return rules;
}

Classifier::Classifier(std::vector<PatternRule> rules, text::StopwordList stopwords)
    : rules_(std::move(rules)), stopwords_(std::move(stopwords)) {}

Classifier Classifier::fromFiles(const std::string& patternPath, text::StopwordList stopwords) {
  return Classifier(parsePatterns(readTextFile(patternPath)), std::move(stopwords));
}

Classifier Classifier::bundled() {
  return fromFiles(resourcePath("speechact_patterns.tsv"), text::defaultStopwords());
}

Kind Classifier::patternVote(const std::string& normalized, bool hasContent) const {
  std::optional<Kind> best;
  for (const auto& rule : rules_) {
    if (best && priority(rule.kind) >= priority(*best)) continue;
    if (std::regex_search(normalized, rule.regex)) best = rule.kind;
  }
  if (best) return *best;
  return hasContent ? Kind::Answer : Kind::Other;
}

Kind Classifier::firstTokenVote(const text::TokenList& tokens) const {
  if (tokens.empty()) return Kind::Other;
  const std::string& first = tokens.front().normalized;
  if (kInterrogatives.count(first)) return Kind::ClarificationQuestion;
  if (kAssent.count(first)) return Kind::Affirmation;
  if (kDissent.count(first)) return Kind::Negation;
  return Kind::Other;
}

Kind Classifier::contentVote(const text::TokenList& tokens) const {
  if (tokens.empty()) return Kind::Other;
  std::size_t content = std::count_if(tokens.begin(), tokens.end(),
                                      [](const text::Token& t) { return !t.isStopword; });
  bool negated = std::any_of(tokens.begin(), tokens.end(), [](const text::Token& t) {
    return kNegators.count(t.normalized) > 0;
  });
  // A short run of function words around a negator ("i dont", "not me")
  // reads as a knowledge gap rather than an answer.
  if (content == 0 && negated && tokens.size() >= 2) return Kind::MetacognitiveDeficit;
  return Kind::Answer;
}

SpeechAct Classifier::classify(std::string_view utterance) const {
  text::TokenList tokens = text::tokenize(utterance, stopwords_);
  SpeechAct act;
  if (tokens.empty()) return act;

  bool hasContent = std::any_of(tokens.begin(), tokens.end(),
                                [](const text::Token& t) { return !t.isStopword; });
  std::string normalized;
  for (const auto& t : tokens) {
    if (!normalized.empty()) normalized.push_back(' ');
    normalized += t.normalized;
  }
  act.votes = {patternVote(normalized, hasContent), firstTokenVote(tokens), contentVote(tokens)};

  Kind winner = act.votes[0];
  int winnerCount = 0;
  for (Kind candidate : act.votes) {
    int n = static_cast<int>(std::count(act.votes.begin(), act.votes.end(), candidate));
    if (n > winnerCount || (n == winnerCount && priority(candidate) < priority(winner))) {
      winner = candidate;
      winnerCount = n;
    }
  }
  act.kind = winner;
  act.confidence = winnerCount / 3.0;
  return act;
}

}  // namespace tutorkit::speechact
