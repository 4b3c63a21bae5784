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
#include "tutorkit/student_model.hpp"

#include <algorithm>

#include "tutorkit/error.hpp"

namespace tutorkit::session {

double StudentModel::coverage(std::string_view conceptId) const {
  auto it = perConcept.find(std::string(conceptId));
  return it == perConcept.end() ? 0.0 : it->second.coverage;
}

bool StudentModel::presumedCovered(std::string_view conceptId) const {
  auto it = perConcept.find(std::string(conceptId));
  return it != perConcept.end() && it->second.presumedCovered;
}

std::string_view evidenceSourceName(EvidenceSource source) {
  switch (source) {
    case EvidenceSource::Summary: return "summary";
    case EvidenceSource::Scaffold: return "scaffold";
    case EvidenceSource::Cloze: return "cloze";
    case EvidenceSource::ConceptMap: return "conceptMap";
  }
  return "unknown";
}

StudentModel coverageUpdate(StudentModel model, const std::string& conceptId, double score,
                            EvidenceSource source, double summaryThreshold,
                            std::int64_t timestamp) {
  if (source == EvidenceSource::ConceptMap)
    throw Error(ErrorCode::IllegalSource, "concept map results are not coverage evidence",
                conceptId);
  if (!(score >= 0.0 && score <= 1.0))
    throw Error(ErrorCode::OutOfRange, "score outside [0,1]", conceptId);
  ConceptState& st = model.perConcept[conceptId];
  st.coverage = std::max(st.coverage, score);
  if (source == EvidenceSource::Summary && score >= summaryThreshold) st.presumedCovered = true;
  st.lastAssessed = timestamp;
  return model;
}

nlohmann::json studentModelToJson(const StudentModel& model) {
  nlohmann::json concepts = nlohmann::json::object();
  for (const auto& [id, st] : model.perConcept)
    concepts[id] = {{"coverage", st.coverage},
                    {"presumedCovered", st.presumedCovered},
                    {"lastAssessed", st.lastAssessed}};
  return {{"studentId", model.studentId}, {"perConcept", concepts}};
}

StudentModel studentModelFromJson(const nlohmann::json& j) {
  StudentModel m;
  m.studentId = j.at("studentId").get<std::string>();
  for (const auto& [id, st] : j.at("perConcept").items())
    m.perConcept[id] = ConceptState{st.at("coverage").get<double>(),
                                    st.at("presumedCovered").get<bool>(),
                                    st.value("lastAssessed", std::int64_t{0})};
  return m;
}

}  // namespace tutorkit::session
