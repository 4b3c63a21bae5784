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

#include <string>
#include <vector>

#include "json.hpp"

namespace tutorkit::jsonschema {

struct SchemaError {
  std::string path;  // JSON pointer into the instance
  std::string rule;  // keyword that failed
  std::string message;
};

// Validates against the draft-07 subset used by the shipped schemas:
// $ref (local), type, required, properties, additionalProperties, items,
// minItems, maxItems, uniqueItems, minLength, pattern, enum, minimum, maximum.
// Any other assertion keyword in the schema throws InvalidArgument so the
// validator never silently enforces less than the document says.
std::vector<SchemaError> validate(const nlohmann::json& schema, const nlohmann::json& instance);

}  // namespace tutorkit::jsonschema
