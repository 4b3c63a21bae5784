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
#include "tutorkit/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "tutorkit/error.hpp"
#include "tutorkit/resources.hpp"

namespace tutorkit::text {

StopwordList StopwordList::fromString(std::string_view contents) {
  std::set<std::string> words;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    std::string w = normalize(line);
    if (w.empty() || line.front() == '#') continue;
    words.insert(std::move(w));
  }
  return StopwordList(std::move(words));
}

StopwordList StopwordList::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot read stopword list: " + path, path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return fromString(buffer.str());
}

namespace {

std::mutex& stopwordMutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<const StopwordList>& stopwordSlot() {
  static std::shared_ptr<const StopwordList> slot;
  return slot;
}

}  // namespace

const StopwordList& defaultStopwords() {
  std::lock_guard lock(stopwordMutex());
  auto& slot = stopwordSlot();
  if (!slot) {
    slot = std::make_shared<const StopwordList>(
        StopwordList::fromFile(resourcePath("stopwords.txt")));
  }
  return *slot;
}

void setDefaultStopwords(StopwordList list) {
  std::lock_guard lock(stopwordMutex());
  // Replaced lists stay alive; callers may hold references to them.
  static std::vector<std::shared_ptr<const StopwordList>> retired;
  if (stopwordSlot()) retired.push_back(stopwordSlot());
  stopwordSlot() = std::make_shared<const StopwordList>(std::move(list));
}

std::string normalize(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (unsigned char c : word) {
    if (c < 0x80 && (std::ispunct(c) || std::isspace(c))) continue;
    out.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
  }
  return out;
}

TokenList tokenize(std::string_view text, const StopwordList& stopwords) {
  TokenList tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    std::string_view surface = text.substr(start, i - start);
    std::string norm = normalize(surface);
    if (norm.empty()) continue;
    bool stop = stopwords.contains(norm);
    tokens.push_back(Token{std::string(surface), std::move(norm), stop});
  }
  return tokens;
}

TokenList tokenize(std::string_view text) { return tokenize(text, defaultStopwords()); }

void TermVector::add(const std::string& term, double weight) {
  if (weight <= 0.0) return;
  entries_[term] += weight;
}

double TermVector::get(const std::string& term) const {
  auto it = entries_.find(term);
  return it == entries_.end() ? 0.0 : it->second;
}

double TermVector::norm() const {
  double s = 0.0;
  for (const auto& [_, w] : entries_) s += w * w;
  return std::sqrt(s);
}

double TermVector::dot(const TermVector& other) const {
  const auto& small = entries_.size() <= other.entries_.size() ? entries_ : other.entries_;
  const auto& large = entries_.size() <= other.entries_.size() ? other.entries_ : entries_;
  double s = 0.0;
  for (const auto& [term, w] : small) {
    auto it = large.find(term);
    if (it != large.end()) s += w * it->second;
  }
  return s;
}

TermVector termVector(const TokenList& tokens) {
  TermVector v;
  for (const auto& t : tokens)
    if (!t.isStopword) v.add(t.normalized);
  return v;
}

TermVector termVector(std::string_view text) { return termVector(tokenize(text)); }

double cosine(const TermVector& a, const TermVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  double c = a.dot(b) / (a.norm() * b.norm());
  return std::clamp(c, 0.0, 1.0);
}

std::size_t editDistance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Two-row Levenshtein over the shorter string.
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool fuzzyWordMatch(std::string_view normalizedTyped, std::string_view target) {
  if (normalizedTyped == target) return true;
  if (target.size() < 5) return false;
  std::size_t gap = normalizedTyped.size() > target.size()
                        ? normalizedTyped.size() - target.size()
                        : target.size() - normalizedTyped.size();
  if (gap > 1) return false;
  return editDistance(normalizedTyped, target) <= 1;
}

double keywordMatchScore(const TokenList& response,
                         const std::vector<std::string>& keywords) {
  if (keywords.empty())
    throw Error(ErrorCode::EmptyKeywordList, "keyword list is empty");
  std::size_t matched = 0;
  for (const auto& raw : keywords) {
    std::string k = normalize(raw);
    bool hit = std::any_of(response.begin(), response.end(), [&](const Token& t) {
      return !t.isStopword && fuzzyWordMatch(t.normalized, k);
    });
    if (hit) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(keywords.size());
}

std::vector<std::string> contentKeywords(std::string_view answerText) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(answerText)) {
    if (t.isStopword) continue;
    if (std::find(out.begin(), out.end(), t.normalized) == out.end())
      out.push_back(t.normalized);
  }
  return out;
}

AssessmentScore assess(std::string_view response, const Expectation& expectation,
                       const StopwordList& stopwords) {
  if (normalize(expectation.answerText).empty())
    throw Error(ErrorCode::EmptyExpectation, "expectation has no answer text");
  TokenList r = tokenize(response, stopwords);
  AssessmentScore s;
  s.cosineComponent = cosine(termVector(r), termVector(tokenize(expectation.answerText, stopwords)));
  s.keywordComponent =
      expectation.keywords.empty() ? 0.0 : keywordMatchScore(r, expectation.keywords);
  s.value = std::max(s.cosineComponent, s.keywordComponent);
  return s;
}

AssessmentScore assess(std::string_view response, const Expectation& expectation) {
  return assess(response, expectation, defaultStopwords());
}

}  // namespace tutorkit::text
