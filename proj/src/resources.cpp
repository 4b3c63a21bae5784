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
#include "tutorkit/resources.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "tutorkit/error.hpp"

namespace tutorkit {

namespace {

std::mutex& dirMutex() {
  static std::mutex m;
  return m;
}

std::string& overrideDir() {
  static std::string dir;
  return dir;
}

}  // namespace

std::string resourceDir() {
  {
    std::lock_guard lock(dirMutex());
    if (!overrideDir().empty()) return overrideDir();
  }
  if (const char* env = std::getenv("TUTORKIT_DATA_DIR"); env && *env) return env;
  return TUTORKIT_DEFAULT_DATA_DIR;
}

void setResourceDir(std::string dir) {
  std::lock_guard lock(dirMutex());
  overrideDir() = std::move(dir);
}

std::string resourcePath(std::string_view relative) {
  std::string base = resourceDir();
  if (!base.empty() && base.back() != '/') base.push_back('/');
  return base + std::string(relative);
}

std::string readTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot read " + path, path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TemplateSet TemplateSet::fromString(std::string_view contents) {
  TemplateSet set;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    set.entries_[line.substr(0, tab)].push_back(line.substr(tab + 1));
  }
  return set;
}

TemplateSet TemplateSet::fromFile(const std::string& path) {
  return fromString(readTextFile(path));
}

const std::string& TemplateSet::pick(std::string_view key, std::size_t i) const {
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.empty())
    throw Error(ErrorCode::InvalidArgument, "no template for " + std::string(key));
  return it->second[i % it->second.size()];
}

std::size_t TemplateSet::count(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.size();
}

std::string fillTemplate(std::string_view tmpl,
                         const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        auto it = vars.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

}  // namespace tutorkit
