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

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tutorkit {

// Directory holding stopwords, patterns, templates, schema and the bundled
// curriculum. Resolution order: setResourceDir(), $TUTORKIT_DATA_DIR, then the
// compiled-in source tree location.
std::string resourceDir();
void setResourceDir(std::string dir);
std::string resourcePath(std::string_view relative);

std::string readTextFile(const std::string& path);

// key<TAB>template lines; a key may repeat to form a rotation list.
class TemplateSet {
 public:
  static TemplateSet fromFile(const std::string& path);
  static TemplateSet fromString(std::string_view contents);

  // i-th entry for key, wrapping around. Throws InvalidArgument for an
  // unknown key.
  const std::string& pick(std::string_view key, std::size_t i = 0) const;
  std::size_t count(std::string_view key) const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

// Replaces each {name} with vars[name]; unknown placeholders are left as is.
std::string fillTemplate(std::string_view tmpl,
                         const std::map<std::string, std::string>& vars);

}  // namespace tutorkit
