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
#include "tutorkit/json_schema.hpp"

#include <regex>
#include <set>

#include "tutorkit/error.hpp"

namespace tutorkit::jsonschema {

namespace {

using nlohmann::json;

const std::set<std::string> kAnnotations{"$schema", "$id", "title", "description",
                                         "definitions", "$comment", "examples", "default"};
const std::set<std::string> kAssertions{"$ref", "type", "required", "properties",
                                        "additionalProperties", "items", "minItems",
                                        "maxItems", "uniqueItems", "minLength", "pattern",
                                        "enum", "minimum", "maximum"};

bool hasType(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "integer") return v.is_number_integer() || v.is_number_unsigned();
  if (type == "number") return v.is_number();
  throw Error(ErrorCode::InvalidArgument, "unsupported schema type: " + type);
}

std::size_t utf8Length(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string escapePointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out.push_back(c);
  }
  return out;
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  void run(const json& schema, const json& v, const std::string& path) {
    if (schema.is_boolean()) {
      if (!schema.get<bool>()) fail(path, "false", "no value allowed here");
      return;
    }
    for (const auto& [key, _] : schema.items()) {
      if (!kAnnotations.count(key) && !kAssertions.count(key))
        throw Error(ErrorCode::InvalidArgument, "unsupported schema keyword: " + key);
    }
    if (schema.contains("$ref")) {
      run(resolve(schema["$ref"].get<std::string>()), v, path);
      return;
    }
    if (schema.contains("type")) {
      const json& t = schema["type"];
      bool ok = false;
      if (t.is_string()) ok = hasType(v, t.get<std::string>());
      else
        for (const auto& alt : t) ok = ok || hasType(v, alt.get<std::string>());
      if (!ok) {
        fail(path, "type", "expected " + t.dump());
        return;
      }
    }
    if (schema.contains("enum")) {
      bool found = false;
      for (const auto& e : schema["enum"]) found = found || e == v;
      if (!found) fail(path, "enum", "value not in " + schema["enum"].dump());
    }
    if (v.is_string()) {
      const auto& s = v.get_ref<const std::string&>();
      if (schema.contains("minLength") && utf8Length(s) < schema["minLength"].get<std::size_t>())
        fail(path, "minLength", "string too short");
      if (schema.contains("pattern") &&
          !std::regex_search(s, std::regex(schema["pattern"].get<std::string>())))
        fail(path, "pattern", "does not match " + schema["pattern"].get<std::string>());
    }
    if (v.is_number()) {
      double d = v.get<double>();
      if (schema.contains("minimum") && d < schema["minimum"].get<double>())
        fail(path, "minimum", "below minimum");
      if (schema.contains("maximum") && d > schema["maximum"].get<double>())
        fail(path, "maximum", "above maximum");
    }
    if (v.is_array()) {
      if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>())
        fail(path, "minItems", "too few items");
      if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>())
        fail(path, "maxItems", "too many items");
      if (schema.value("uniqueItems", false)) {
        for (std::size_t i = 0; i < v.size(); ++i)
          for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] == v[j]) fail(path + "/" + std::to_string(j), "uniqueItems", "duplicate item");
      }
      if (schema.contains("items"))
        for (std::size_t i = 0; i < v.size(); ++i)
          run(schema["items"], v[i], path + "/" + std::to_string(i));
    }
    if (v.is_object()) {
      if (schema.contains("required"))
        for (const auto& req : schema["required"])
          if (!v.contains(req.get<std::string>()))
            fail(path + "/" + escapePointer(req.get<std::string>()), "required", "missing");
      const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
      for (const auto& [key, child] : v.items()) {
        std::string childPath = path + "/" + escapePointer(key);
        if (props && props->contains(key)) {
          run((*props)[key], child, childPath);
        } else if (schema.contains("additionalProperties")) {
          run(schema["additionalProperties"], child, childPath);
        }
      }
    }
  }

  std::vector<SchemaError> errors;

 private:
  const json& resolve(const std::string& ref) {
    if (ref.rfind("#/", 0) != 0)
      throw Error(ErrorCode::InvalidArgument, "only local $ref supported: " + ref);
    return root_.at(json::json_pointer(ref.substr(1)));
  }

  void fail(const std::string& path, const std::string& rule, const std::string& message) {
    errors.push_back(SchemaError{path.empty() ? "/" : path, rule, message});
  }

  const json& root_;
};

}  // namespace

std::vector<SchemaError> validate(const json& schema, const json& instance) {
  Validator v(schema);
  v.run(schema, instance, "");
  return std::move(v.errors);
}

}  // namespace tutorkit::jsonschema
