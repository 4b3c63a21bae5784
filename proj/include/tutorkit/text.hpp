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
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tutorkit::text {

struct Token {
  std::string surface;
  std::string normalized;
  bool isStopword = false;

  bool operator==(const Token&) const = default;
};

using TokenList = std::vector<Token>;

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::set<std::string> words) : words_(std::move(words)) {}

  // One word per line; blank lines and lines starting with '#' are skipped.
  static StopwordList fromFile(const std::string& path);
  static StopwordList fromString(std::string_view contents);

  bool contains(std::string_view normalized) const {
    return words_.find(std::string(normalized)) != words_.end();
  }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

// The list loaded from the bundled data directory on first use.
const StopwordList& defaultStopwords();
void setDefaultStopwords(StopwordList list);

// Lowercase (ASCII) and drop ASCII punctuation.
std::string normalize(std::string_view word);

// Splits on whitespace, normalizes each piece and drops pieces that normalize
// to nothing.
TokenList tokenize(std::string_view text, const StopwordList& stopwords);
TokenList tokenize(std::string_view text);

// Sparse non-negative weights; zero entries are never stored.
class TermVector {
 public:
  TermVector() = default;

  void add(const std::string& term, double weight = 1.0);
  double get(const std::string& term) const;
  double norm() const;
  double dot(const TermVector& other) const;
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, double>& entries() const { return entries_; }

  bool operator==(const TermVector&) const = default;

 private:
  std::map<std::string, double> entries_;
};

// Raw counts over non-stopword normalized tokens.
TermVector termVector(const TokenList& tokens);
TermVector termVector(std::string_view text);

double cosine(const TermVector& a, const TermVector& b);

std::size_t editDistance(std::string_view a, std::string_view b);

// A typed word matches a target exactly after normalization, or within one
// edit when the target has at least five characters.
bool fuzzyWordMatch(std::string_view normalizedTyped, std::string_view target);

// Fraction of keywords matched by some non-stopword token. Throws
// EmptyKeywordList.
double keywordMatchScore(const TokenList& response,
                         const std::vector<std::string>& keywords);

struct Expectation {
  std::string answerText;
  std::vector<std::string> keywords;
};

struct AssessmentScore {
  double value = 0.0;
  double cosineComponent = 0.0;
  double keywordComponent = 0.0;
};

// Keywords derived from an answer text: unique non-stopword normalized tokens
// in first-occurrence order.
std::vector<std::string> contentKeywords(std::string_view answerText);

// max(cosine, keyword match). An empty keyword list contributes 0 on the
// keyword channel. Throws EmptyExpectation for a blank answer text.
AssessmentScore assess(std::string_view response, const Expectation& expectation);
AssessmentScore assess(std::string_view response, const Expectation& expectation,
                       const StopwordList& stopwords);

}  // namespace tutorkit::text
