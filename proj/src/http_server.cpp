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
#include "tutorkit/http_server.hpp"

#include <mutex>
#include <utility>

#include "httplib.h"

namespace tutorkit::service {

struct HttpServer::Impl {
  httplib::Server server;
  enum class State { Idle, Listening, Stopped };
  std::mutex mutex;
  State state = State::Idle;
};

HttpServer::HttpServer(Service& service, HttpOptions options)
    : impl_(std::make_unique<Impl>()), options_(std::move(options)) {
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, req.body, {}};
    for (const auto& [k, v] : req.headers) r.headers.emplace(k, v);
    ApiResponse out = service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.contentType);
  };
  const std::string api = std::string(kApiPrefix) + "/.*";
  impl_->server.Get(api, handler);
  impl_->server.Post(api, handler);
  impl_->server.Put(api, handler);
  impl_->server.Delete(api, handler);
  if (options_.staticDir) impl_->server.set_mount_point("/", *options_.staticDir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  if (port_ > 0) return port_;
  if (options_.port == 0) {
    port_ = impl_->server.bind_to_any_port(options_.host);
  } else if (impl_->server.bind_to_port(options_.host, options_.port)) {
    port_ = options_.port;
  }
  if (port_ <= 0)
    throw Error(ErrorCode::IoFailure, "cannot bind " + options_.host + ":" + std::to_string(options_.port));
  return port_;
}

void HttpServer::listen() {
  bind();
  {
    std::lock_guard lock(impl_->mutex);
    if (impl_->state == Impl::State::Stopped) return;
    impl_->state = Impl::State::Listening;
  }
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (!impl_) return;
  Impl::State previous;
  {
    std::lock_guard lock(impl_->mutex);
    previous = std::exchange(impl_->state, Impl::State::Stopped);
  }
  if (previous != Impl::State::Listening) return;
  impl_->server.wait_until_ready();
  impl_->server.stop();
}

}  // namespace tutorkit::service
