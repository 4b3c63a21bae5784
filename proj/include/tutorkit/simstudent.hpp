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
#include <vector>

#include "json.hpp"
#include "tutorkit/service.hpp"
#include "tutorkit/session.hpp"

namespace tutorkit::simstudent {

struct Policy {
  enum class Kind { Perfect, Ignorant, Noisy, SummaryOnly };
  Kind kind = Kind::Perfect;
  double p = 1.0;  // Noisy
  int k = 0;       // SummaryOnly

  static Policy perfect() { return {Kind::Perfect, 1.0, 0}; }
  static Policy ignorant() { return {Kind::Ignorant, 0.0, 0}; }
  static Policy noisy(double p);
  static Policy summaryOnly(int k);

  // "perfect", "ignorant", "noisy:<p>", "summaryonly:<k>" (case-insensitive).
  static Policy parse(const std::string& spec);
  std::string name() const;
};

inline constexpr const char* kDontKnow = "I don't know";

struct TranscriptEntry {
  std::string role;  // "student" or "tutor"
  std::string phase;
  std::string text;
  nlohmann::json detail;  // tutor: feedback/question/media; student: task body

  bool operator==(const TranscriptEntry&) const = default;
};

struct EpisodeReport {
  std::string sessionId;
  std::string topicId;
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<TranscriptEntry> transcript;
  std::vector<std::string> phaseTrace;
  std::size_t lectureTutorTurns = 0;
  std::size_t lectureStudentTurns = 0;
  double turnRatio = 0.0;  // lecture tutor : student
  std::map<std::string, double> finalCoverage;
  int roundsUsed = 0;
  double summaryRatio = 0.0;
  std::vector<session::CycleRecord> cycles;
  std::uint64_t transcriptHash = 0;
  std::uint64_t stateHash = 0;
  std::size_t requests = 0;
};

nlohmann::json reportToJson(const EpisodeReport& r);

// Runs one episode to Complete through service.handle(). The policy reads the
// topic like a student who has studied it, and nothing else. Throws on any
// unexpected API error.
EpisodeReport runEpisode(service::Service& service, const std::string& topicId, const Policy& policy,
                         std::uint64_t seed, const std::string& studentId = "sim-student");

// Episode on a fresh in-memory service over the given curriculum directory
// with a logical clock.
EpisodeReport runEpisode(const std::string& curriculumDir, const std::string& topicId, const Policy& policy,
                         std::uint64_t seed);

// Service over a curriculum directory with the bundled resources and item
// bank, in memory and on a deterministic clock.
std::unique_ptr<service::Service> makeSimService(const std::string& curriculumDir);

}  // namespace tutorkit::simstudent
