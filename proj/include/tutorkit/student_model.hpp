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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

namespace tutorkit::session {

struct ConceptState {
  double coverage = 0.0;
  bool presumedCovered = false;
  std::int64_t lastAssessed = 0;  // ms since epoch, 0 = never

  bool operator==(const ConceptState&) const = default;
};

struct StudentModel {
  std::string studentId;
  std::map<std::string, ConceptState> perConcept;

  double coverage(std::string_view conceptId) const;
  bool presumedCovered(std::string_view conceptId) const;

  bool operator==(const StudentModel&) const = default;
};

enum class EvidenceSource { Summary, Scaffold, Cloze, ConceptMap };

std::string_view evidenceSourceName(EvidenceSource source);

// coverage' = max(coverage, score). Only a summary can mark a concept
// presumed covered, and only at or above summaryThreshold. Concept-map
// results are recognition evidence and throw IllegalSource.
StudentModel coverageUpdate(StudentModel model, const std::string& conceptId, double score,
                            EvidenceSource source, double summaryThreshold,
                            std::int64_t timestamp = 0);

nlohmann::json studentModelToJson(const StudentModel& model);
StudentModel studentModelFromJson(const nlohmann::json& j);

}  // namespace tutorkit::session
