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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tutorkit/analytics.hpp"
#include "tutorkit/curriculum.hpp"
#include "tutorkit/dialogue.hpp"
#include "tutorkit/error.hpp"
#include "tutorkit/session_store.hpp"
#include "tutorkit/testbank.hpp"

namespace tutorkit::service {

inline constexpr const char* kApiPrefix = "/v1";
inline constexpr const char* kTokenHeader = "X-Api-Token";

struct ApiRequest {
  std::string method;
  std::string path;  // query string, if any, is ignored
  std::string body;
  std::map<std::string, std::string> headers;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string contentType = "application/json";

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

int httpStatus(ErrorCode code);

struct ServiceOptions {
  session::SessionStore::Options store;
  std::optional<std::string> apiToken;
};

// The /v1 API as a plain request handler; the HTTP adapter and the
// simulated students both go through handle(). Thread safe.
class Service {
 public:
  Service(curriculum::Curriculum curriculum, dialogue::Resources resources, testbank::ItemBank bank,
          ServiceOptions options = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ApiResponse handle(const ApiRequest& request);

  // Convenience wrappers around handle().
  ApiResponse get(const std::string& path);
  ApiResponse post(const std::string& path, const nlohmann::json& body);

  session::SessionStore& store() { return *store_; }
  const curriculum::Curriculum& curriculum() const { return curriculum_; }
  const testbank::ItemBank& itemBank() const { return bank_; }
  std::vector<analytics::ItemResponseRecord> records() const;

  // Client-safe projections; answer keys never appear in these.
  static nlohmann::json clientTurn(const dialogue::TutorTurn& turn);
  static nlohmann::json sessionView(const session::SessionState& state, const curriculum::Topic& topic);
  nlohmann::json clientTest(const testbank::AssembledTest& test) const;

 private:
  struct TestEntry {
    testbank::AssembledTest test;
    testbank::ScoreContext context;
    std::string sessionId;
    bool submitted = false;
  };

  ApiResponse route(const ApiRequest& request);
  ApiResponse createSession(const nlohmann::json& body);
  ApiResponse studentTurn(const std::string& id, const nlohmann::json& body);
  ApiResponse taskSubmission(const std::string& id, const nlohmann::json& body);
  ApiResponse assembleSessionTests(const std::string& id, const nlohmann::json& body);
  ApiResponse submitTest(const std::string& testId, const nlohmann::json& body,
                         const std::optional<std::string>& sessionId);
  ApiResponse assembleDelayed(const nlohmann::json& body);
  std::string registerTest(testbank::AssembledTest test, testbank::ScoreContext context,
                           const std::string& sessionId);
  void loadPersisted();
  void appendTestLine(const TestEntry& e);
  void appendRecords(const std::vector<analytics::ItemResponseRecord>& records);

  curriculum::Curriculum curriculum_;
  dialogue::Resources resources_;
  testbank::ItemBank bank_;
  ServiceOptions options_;
  std::unique_ptr<session::SessionStore> store_;

  mutable std::mutex testsMutex_;
  std::map<std::string, TestEntry> tests_;
  std::vector<analytics::ItemResponseRecord> records_;
  std::uint64_t testCounter_ = 0;
};

}  // namespace tutorkit::service
