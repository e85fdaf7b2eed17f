// Copyright 2026 The critiq Authors
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

#include "critiq/service/http_server.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "critiq/error.hpp"

namespace critiq {

HttpServer::HttpServer(Service& service, std::optional<std::filesystem::path> ui_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  if (ui_dir) {
    if (!std::filesystem::is_directory(*ui_dir)) {
      throw ValidationError("UI directory " + ui_dir->string() + " does not exist");
    }
    server_->set_mount_point("/", ui_dir->string());
  }
  const auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    Response r;
    try {
      r = service_.handle(req.method, req.path, req.body);
    } catch (const std::exception& e) {
      spdlog::error("{} {} failed: {}", req.method, req.path, e.what());
      r = error_response(500, "internal", e.what());
    }
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server_->Get(".*", forward);
  server_->Post(".*", forward);
  server_->Delete(".*", forward);
  server_->Put(".*", forward);
  server_->set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw ValidationError("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw ValidationError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

bool HttpServer::run() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

bool HttpServer::is_running() const { return server_->is_running(); }

}  // namespace critiq
