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

#include <memory>
#include <optional>
#include <string>

#include "tutorkit/service.hpp"

namespace tutorkit::service {

struct HttpOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds any free port
  std::optional<std::string> staticDir;  // served under / when set
};

// cpp-httplib adapter over Service::handle.
class HttpServer {
 public:
  HttpServer(Service& service, HttpOptions options);
  ~HttpServer();

  // Binds the socket; returns the bound port. Throws IoFailure.
  int bind();
  // Serves until stop(); binds first if needed.
  void listen();
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  HttpOptions options_;
  int port_ = 0;
};

}  // namespace tutorkit::service
