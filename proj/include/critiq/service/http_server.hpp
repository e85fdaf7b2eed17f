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

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "critiq/service/service.hpp"

namespace httplib {
class Server;
}

namespace critiq {

// HTTP adapter over Service. Static UI assets, when given, are served from
// the root path; API routes take precedence for paths with no file.
class HttpServer {
 public:
  explicit HttpServer(Service& service,
                      std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~HttpServer();

  // Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool run();
  void stop();
  bool is_running() const;

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace critiq
