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

#include <optional>
#include <string_view>

namespace tutorkit {

enum class Phase {
  Lecture,
  Summary,
  ConceptMaps1,
  Scaffolding1,
  ConceptMaps2,
  Scaffolding2,
  Cloze,
  Complete,
};

std::string_view phaseName(Phase phase);
std::optional<Phase> phaseFromName(std::string_view name);

inline bool isConceptMaps(Phase p) { return p == Phase::ConceptMaps1 || p == Phase::ConceptMaps2; }
inline bool isScaffolding(Phase p) { return p == Phase::Scaffolding1 || p == Phase::Scaffolding2; }

}  // namespace tutorkit
