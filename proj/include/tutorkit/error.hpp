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

#include <stdexcept>
#include <string>
#include <string_view>

namespace tutorkit {

enum class ErrorCode {
  MissingFile,
  SchemaViolation,
  DanglingReference,
  EmptyKeywordList,
  EmptyExpectation,
  EmptyCandidates,
  OutOfRange,
  ScriptExhausted,
  EmptyAgenda,
  NoTriples,
  UnknownSlot,
  SlotAlreadyFilled,
  NoSpans,
  UnknownBlank,
  UnknownTopic,
  UnknownSession,
  SessionAlreadyOpen,
  IllegalEventForPhase,
  SessionComplete,
  IllegalSource,
  Conflict,
  InsufficientItems,
  UnknownItem,
  UnknownTest,
  NonPositiveOR,
  SingularDesign,
  Separation,
  IoFailure,
  InvalidArgument,
  Unauthorized,
};

std::string_view errorCodeName(ErrorCode code);

// Single exception type for the engine; the C API and HTTP layer map
// `code()` onto status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Error(ErrorCode code, std::string message, std::string field)
      : std::runtime_error(std::move(message)),
        code_(code),
        field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  // Offending field or id, when one applies.
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace tutorkit
