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

#include <filesystem>
#include <random>
#include <string>

#include "tutorkit/curriculum.hpp"
#include "tutorkit/dialogue.hpp"
#include "tutorkit/resources.hpp"

namespace tktest {

inline std::string demoCurriculumDir() { return tutorkit::resourcePath("curriculum"); }
inline std::string fixtureCurriculumDir() { return std::string(TUTORKIT_TEST_FIXTURES) + "/curriculum"; }

inline const tutorkit::curriculum::Curriculum& demo() {
  static const auto c = tutorkit::curriculum::loadCurriculum(demoCurriculumDir());
  return c;
}
inline const tutorkit::curriculum::Topic& demoTopic() { return demo().topic("protein-function"); }

inline const tutorkit::curriculum::Curriculum& fixture() {
  static const auto c = tutorkit::curriculum::loadCurriculum(fixtureCurriculumDir());
  return c;
}

inline const tutorkit::dialogue::Resources& resources() {
  static const auto r = tutorkit::dialogue::Resources::bundled();
  return r;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratchDir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("tutorkit-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string randomString(std::mt19937_64& g, std::size_t maxLen, const std::string& alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, maxLen), pick(0, alphabet.size() - 1);
  std::string s(len(g), ' ');
  for (auto& c : s) c = alphabet[pick(g)];
  return s;
}

}  // namespace tktest
