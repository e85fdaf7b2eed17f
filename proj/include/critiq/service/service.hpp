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

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include <json.hpp>

#include "critiq/critique/session.hpp"
#include "critiq/data/dataset.hpp"

namespace critiq {

struct ServiceConfig {
  std::size_t top_n = 20;
  std::size_t top_k = 10;
  std::chrono::seconds session_ttl{3600};
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

// JSON session API over a loaded model, independent of transport.
// HttpServer adapts it to HTTP.
class Service {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  Service(Dataset dataset, MmvaeModel<float> model, std::unique_ptr<Blender> blender,
          ServiceConfig config = {}, Clock clock = {});

  Response handle(std::string_view method, std::string_view path,
                  std::string_view body);

  // Drops sessions idle for longer than the TTL; returns how many.
  std::size_t evict_expired();
  std::size_t session_count() const;

  const Dataset& dataset() const { return dataset_; }
  const MmvaeModel<float>& model() const { return model_; }
  const Blender& blender() const { return *blender_; }

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<CritiqueSession> session;
    std::chrono::steady_clock::time_point last_used;
  };

  Response create_session(const nlohmann::json& body);
  Response add_critique(const std::string& id, const nlohmann::json& body);
  Response get_session(const std::string& id);
  Response close_session(const std::string& id);
  Response list_keyphrases() const;
  Response health() const;

  std::shared_ptr<Entry> find(const std::string& id);
  nlohmann::json session_view(const std::string& id, const CritiqueSession& s) const;
  std::string new_id();

  Dataset dataset_;
  MmvaeModel<float> model_;
  std::unique_ptr<Blender> blender_;
  ServiceConfig config_;
  Clock clock_;

  mutable std::mutex store_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t id_state_;
};

Response error_response(int status, std::string_view code, std::string_view message);

}  // namespace critiq
