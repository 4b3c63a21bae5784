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
#include "tutorkit/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "tutorkit/error.hpp"

namespace tutorkit::retrieval {

double DialogueBasis::dotWith(std::size_t i, const std::vector<double>& dense) const {
  const auto& b = basis_[i];
  double s = 0.0;
  std::size_t n = std::min(b.size(), dense.size());
  for (std::size_t k = 0; k < n; ++k) s += b[k] * dense[k];
  return s;
}

std::vector<double> DialogueBasis::embed(const text::TermVector& v) const {
  std::vector<double> dense(vocabulary_.size(), 0.0);
  for (const auto& [term, w] : v.entries()) {
    auto it = index_.find(term);
    if (it != index_.end()) dense[it->second] = w;
  }
  return dense;
}

DialogueBasis DialogueBasis::addTurn(std::string_view turnText) const {
  return addVector(text::termVector(turnText));
}

DialogueBasis DialogueBasis::addVector(const text::TermVector& v) const {
  DialogueBasis next = *this;
  next.turns_++;
  double norm = v.norm();
  if (norm == 0.0) return next;

  for (const auto& [term, _] : v.entries()) {
    if (next.index_.emplace(term, next.vocabulary_.size()).second) next.vocabulary_.push_back(term);
  }
  std::vector<double> r = next.embed(v);
  for (double& x : r) x /= norm;

  // Classical Gram-Schmidt applied twice keeps the Gram matrix at machine
  // precision even for long, nearly dependent turn sequences.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < next.basis_.size(); ++i) {
      double c = next.dotWith(i, r);
      const auto& b = next.basis_[i];
      for (std::size_t k = 0; k < b.size(); ++k) r[k] -= c * b[k];
    }
  }
  double rn = 0.0;
  for (double x : r) rn += x * x;
  rn = std::sqrt(rn);
  if (rn <= kDependenceCutoff) return next;
  for (double& x : r) x /= rn;
  next.basis_.push_back(std::move(r));
  return next;
}

double DialogueBasis::projectionCoverage(const text::TermVector& v) const {
  double norm = v.norm();
  if (norm == 0.0) return 0.0;
  std::vector<double> dense = embed(v);
  double s = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    double c = dotWith(i, dense);
    s += c * c;
  }
  return std::sqrt(s) / norm;
}

std::vector<double> DialogueBasis::basisVector(std::size_t i) const {
  std::vector<double> out = basis_.at(i);
  out.resize(vocabulary_.size(), 0.0);
  return out;
}

double DialogueBasis::gram(std::size_t i, std::size_t j) const { return dotWith(i, basis_.at(j)); }

nlohmann::json DialogueBasis::toJson() const {
  return {{"vocabulary", vocabulary_}, {"basis", basis_}, {"sourceTurnCount", turns_}};
}

DialogueBasis DialogueBasis::fromJson(const nlohmann::json& j) {
  DialogueBasis b;
  b.vocabulary_ = j.at("vocabulary").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < b.vocabulary_.size(); ++i) b.index_[b.vocabulary_[i]] = i;
  b.basis_ = j.at("basis").get<std::vector<std::vector<double>>>();
  b.turns_ = j.at("sourceTurnCount").get<std::size_t>();
  return b;
}

bool inCommonGround(const DialogueBasis& basis, const curriculum::Concept& item,
                    double threshold) {
  return basis.projectionCoverage(text::termVector(item.statement)) >= threshold;
}

double hypotheticalGain(const curriculum::QuestionTemplate& q, const session::StudentModel& model) {
  double now = model.coverage(q.conceptId);
  return std::max(now, 1.0) - now;
}

const curriculum::QuestionTemplate& selectQuestion(
    const std::vector<curriculum::QuestionTemplate>& candidates,
    const session::StudentModel& model, const DialogueBasis& basis) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyCandidates, "no candidate questions");
  constexpr double kTie = 1e-12;
  const curriculum::QuestionTemplate* best = nullptr;
  double bestGain = 0.0, bestGround = 0.0;
  for (const auto& q : candidates) {
    double gain = hypotheticalGain(q, model);
    double ground = basis.projectionCoverage(text::termVector(q.expectedAnswer));
    bool better = false;
    if (!best || gain > bestGain + kTie) {
      better = true;
    } else if (std::abs(gain - bestGain) <= kTie) {
      if (ground > bestGround + kTie) better = true;
      else if (std::abs(ground - bestGround) <= kTie && q.ordinal < best->ordinal) better = true;
    }
    if (better) {
      best = &q;
      bestGain = gain;
      bestGround = ground;
    }
  }
  return *best;
}

}  // namespace tutorkit::retrieval
