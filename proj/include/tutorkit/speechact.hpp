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
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "tutorkit/text.hpp"

namespace tutorkit::speechact {

enum class Kind {
  Answer,
  MetacognitiveDeficit,
  RepeatRequest,
  ClarificationQuestion,
  Affirmation,
  Negation,
  Other,
};

std::string_view kindName(Kind kind);
std::optional<Kind> kindFromName(std::string_view name);

// Tie-break rank; lower wins.
int priority(Kind kind);

struct SpeechAct {
  Kind kind = Kind::Other;
  double confidence = 1.0;  // agreeing voters / 3
  std::array<Kind, 3> votes{Kind::Other, Kind::Other, Kind::Other};
};

struct PatternRule {
  Kind kind;
  std::string source;
  std::regex regex;
};

// Three-voter rule ensemble: pattern rules, first-token cues and a
// content-word heuristic. The cue and content voters have disjoint outputs
// on non-empty input, so a pattern hit is never outvoted by a coalition of
// the two; together with the priority order this makes every metacognitive
// pattern hit classify as MetacognitiveDeficit.
class Classifier {
 public:
  explicit Classifier(std::vector<PatternRule> rules, text::StopwordList stopwords);

  // Pattern file: KIND<TAB>regex per line, '#' comments.
  static Classifier fromFiles(const std::string& patternPath, text::StopwordList stopwords);
  static Classifier bundled();

  SpeechAct classify(std::string_view utterance) const;

  Kind patternVote(const std::string& normalized, bool hasContent) const;
  Kind firstTokenVote(const text::TokenList& tokens) const;
  Kind contentVote(const text::TokenList& tokens) const;

  const std::vector<PatternRule>& rules() const { return rules_; }

 private:
  std::vector<PatternRule> rules_;
  text::StopwordList stopwords_;
};

// Lowercase, punctuation stripped, tokens joined by single spaces.
std::string normalizeUtterance(std::string_view utterance);

std::vector<PatternRule> parsePatterns(std::string_view contents);

}  // namespace tutorkit::speechact
