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
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tutorkit/retrieval.hpp"
#include "tutorkit/student_model.hpp"
#include "tutorkit/text.hpp"

using namespace tutorkit;
using retrieval::DialogueBasis;

namespace {

std::string randomTurn(std::mt19937_64& g) {
  static const std::vector<std::string> words = {"protein", "enzyme",  "amino",   "acid",   "chain",  "cell",
                                                 "blood",   "oxygen",  "insulin", "signal", "shape",  "heat",
                                                 "muscle",  "collagen", "dna",    "ribosome", "germ", "fold"};
  std::string s;
  const int n = 1 + static_cast<int>(g() % 7);
  for (int i = 0; i < n; ++i) s += words[g() % words.size()] + " ";
  return s;
}

double maxGramError(const DialogueBasis& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      worst = std::max(worst, std::abs(b.gram(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST_SUITE("retrieval") {

TEST_CASE("empty basis covers nothing") {
  DialogueBasis b;
  CHECK(b.size() == 0);
  CHECK(b.projectionCoverage(text::termVector("enzymes")) == 0.0);
  CHECK(b.projectionCoverage(text::TermVector{}) == 0.0);
}

TEST_CASE("orthonormality and span preservation under random insertion") {
  std::mt19937_64 g(99);
  DialogueBasis b;
  std::vector<text::TermVector> turns;
  for (int i = 0; i < 120; ++i) {
    auto t = randomTurn(g);
    turns.push_back(text::termVector(t));
    b = b.addTurn(t);
    REQUIRE(maxGramError(b) < 1e-9);
  }
  CHECK(b.sourceTurnCount() == 120);
  CHECK(b.size() <= b.dimension());
  for (const auto& v : turns) CHECK(b.projectionCoverage(v) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dependent turns do not grow the basis") {
  auto b = DialogueBasis{}.addTurn("enzymes speed reactions");
  auto b2 = b.addTurn("Enzymes speed reactions!");
  CHECK(b2.size() == b.size());
  CHECK(b2.sourceTurnCount() == 2);
}

TEST_CASE("projection coverage never exceeds one") {
  std::mt19937_64 g(5);
  DialogueBasis b;
  for (int i = 0; i < 60; ++i) {
    b = b.addTurn(randomTurn(g));
    CHECK(b.projectionCoverage(text::termVector(randomTurn(g))) <= 1.0 + 1e-9);
  }
}

TEST_CASE("basis json round trip") {
  auto b = DialogueBasis{}.addTurn("proteins fold").addTurn("heat denatures proteins");
  CHECK(DialogueBasis::fromJson(b.toJson()) == b);
}

TEST_CASE("common ground follows the concept statement") {
  const auto& c = tktest::demoTopic().concepts[0];
  CHECK_FALSE(retrieval::inCommonGround(DialogueBasis{}, c));
  CHECK(retrieval::inCommonGround(DialogueBasis{}.addTurn(c.statement), c));
}

TEST_CASE("selectQuestion deterministic and permutation invariant") {
  const auto& topic = tktest::demoTopic();
  std::vector<curriculum::QuestionTemplate> all;
  for (const auto& c : topic.concepts) {
    all.insert(all.end(), c.prompts.begin(), c.prompts.end());
    all.insert(all.end(), c.verificationQuestions.begin(), c.verificationQuestions.end());
  }
  session::StudentModel model;
  model.perConcept["pf1"].coverage = 0.9;
  model.perConcept["pf4"].coverage = 0.2;
  auto basis = DialogueBasis{}.addTurn(topic.concepts[2].statement);
  const auto& first = retrieval::selectQuestion(all, model, basis);
  std::mt19937_64 g(3);
  for (int i = 0; i < 50; ++i) {
    auto perm = all;
    std::shuffle(perm.begin(), perm.end(), g);
    CHECK(retrieval::selectQuestion(perm, model, basis).id == first.id);
  }
  CHECK_THROWS(retrieval::selectQuestion({}, model, basis));
}

}
