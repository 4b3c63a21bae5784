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
#include "tutorkit/error.hpp"

namespace tutorkit {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::EmptyKeywordList: return "EmptyKeywordList";
    case ErrorCode::EmptyExpectation: return "EmptyExpectation";
    case ErrorCode::EmptyCandidates: return "EmptyCandidates";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ScriptExhausted: return "ScriptExhausted";
    case ErrorCode::EmptyAgenda: return "EmptyAgenda";
    case ErrorCode::NoTriples: return "NoTriples";
    case ErrorCode::UnknownSlot: return "UnknownSlot";
    case ErrorCode::SlotAlreadyFilled: return "SlotAlreadyFilled";
    case ErrorCode::NoSpans: return "NoSpans";
    case ErrorCode::UnknownBlank: return "UnknownBlank";
    case ErrorCode::UnknownTopic: return "UnknownTopic";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::SessionAlreadyOpen: return "SessionAlreadyOpen";
    case ErrorCode::IllegalEventForPhase: return "IllegalEventForPhase";
    case ErrorCode::SessionComplete: return "SessionComplete";
    case ErrorCode::IllegalSource: return "IllegalSource";
    case ErrorCode::Conflict: return "Conflict";
    case ErrorCode::InsufficientItems: return "InsufficientItems";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::UnknownTest: return "UnknownTest";
    case ErrorCode::NonPositiveOR: return "NonPositiveOR";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::Separation: return "Separation";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Unauthorized: return "Unauthorized";
  }
  return "Unknown";
}

}  // namespace tutorkit
