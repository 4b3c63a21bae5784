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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tutorkit/curriculum.hpp"
#include "tutorkit/student_model.hpp"
#include "tutorkit/text.hpp"

namespace tutorkit::retrieval {

inline constexpr double kCommonGroundThreshold = 0.5;
inline constexpr double kDependenceCutoff = 1e-6;

// Orthonormal basis over the shared vocabulary of the dialogue so far. Each
// basis vector is stored densely over the vocabulary known when it was
// added; later vocabulary growth zero-extends it implicitly.
class DialogueBasis {
 public:
  DialogueBasis() = default;

  // Gram-Schmidt step on the unit-normalized turn vector: subtract
  // projections on the existing basis (two passes), append the residual if
  // its norm exceeds kDependenceCutoff. Turn count increments either way.
  DialogueBasis addTurn(std::string_view turnText) const;
  DialogueBasis addVector(const text::TermVector& v) const;

  // ||proj(v)|| / ||v||, 0 for the zero vector.
  double projectionCoverage(const text::TermVector& v) const;

  std::size_t size() const { return basis_.size(); }
  std::size_t sourceTurnCount() const { return turns_; }
  std::size_t dimension() const { return vocabulary_.size(); }

  // Basis vector i expanded to the current vocabulary.
  std::vector<double> basisVector(std::size_t i) const;
  // Inner product of basis vectors i and j.
  double gram(std::size_t i, std::size_t j) const;
  // v in vocabulary coordinates; terms outside the vocabulary are dropped.
  std::vector<double> embed(const text::TermVector& v) const;
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  nlohmann::json toJson() const;
  static DialogueBasis fromJson(const nlohmann::json& j);

  bool operator==(const DialogueBasis&) const = default;

 private:
  double dotWith(std::size_t i, const std::vector<double>& dense) const;

  std::vector<std::string> vocabulary_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<double>> basis_;
  std::size_t turns_ = 0;
};

// Both free functions mirror the members for call sites that read better
// without an object.
inline DialogueBasis addTurn(const DialogueBasis& basis, std::string_view turnText) {
  return basis.addTurn(turnText);
}
inline double projectionCoverage(const DialogueBasis& basis, const text::TermVector& v) {
  return basis.projectionCoverage(v);
}

bool inCommonGround(const DialogueBasis& basis, const curriculum::Concept& item,
                    double threshold = kCommonGroundThreshold);

// Gain in the student's coverage of q's concept if q were answered perfectly.
double hypotheticalGain(const curriculum::QuestionTemplate& q, const session::StudentModel& model);

// argmax hypotheticalGain; ties go to the larger projection coverage of the
// expected answer, then to the earlier curriculum ordinal. Independent of
// candidate order. Throws EmptyCandidates.
const curriculum::QuestionTemplate& selectQuestion(
    const std::vector<curriculum::QuestionTemplate>& candidates,
    const session::StudentModel& model, const DialogueBasis& basis);

}  // namespace tutorkit::retrieval
