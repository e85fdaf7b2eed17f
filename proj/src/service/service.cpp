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

#include "critiq/service/service.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>
#include <vector>

#include "critiq/error.hpp"
#include "critiq/model/checkpoint.hpp"

namespace critiq {
namespace {

std::vector<std::string> split_path(std::string_view path) {
  const auto q = path.find('?');
  if (q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto end = path.find('/', start);
    const auto piece = path.substr(start, end == std::string_view::npos ? path.npos : end - start);
    if (!piece.empty()) parts.emplace_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

Response not_allowed() {
  return error_response(405, "method_not_allowed", "method not allowed on this resource");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// Resolves an array of external ids; unknown ids are collected.
IndexList resolve(const nlohmann::json& arr, const IdMap& map,
                  std::vector<std::string>& unknown) {
  IndexList out;
  for (const auto& v : arr) {
    if (!v.is_string()) {
      unknown.push_back(v.dump());
      continue;
    }
    const auto idx = map.find(v.get<std::string>());
    if (idx) {
      out.push_back(*idx);
    } else {
      unknown.push_back(v.get<std::string>());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Response error_response(int status, std::string_view code, std::string_view message) {
  return {status, {{"code", code}, {"message", message}}};
}

Service::Service(Dataset dataset, MmvaeModel<float> model,
                 std::unique_ptr<Blender> blender, ServiceConfig config, Clock clock)
    : dataset_(std::move(dataset)),
      model_(std::move(model)),
      blender_(std::move(blender)),
      config_(config),
      clock_(clock ? std::move(clock) : Clock(std::chrono::steady_clock::now)),
      id_state_(std::random_device{}() ^ (std::uint64_t{std::random_device{}()} << 32)) {
  const auto dims = model_.dims();
  if (dims.n_items != dataset_.n_items() || dims.n_keyphrases != dataset_.n_keyphrases()) {
    throw ContractViolation("service model dims do not match the dataset");
  }
  if (!blender_) throw ContractViolation("service needs a blender");
}

Response Service::handle(std::string_view method, std::string_view path,
                         std::string_view body) {
  evict_expired();
  const auto parts = split_path(path);
  nlohmann::json payload = nlohmann::json::object();
  if (method == "POST" && !body.empty()) {
    payload = nlohmann::json::parse(body, nullptr, false);
    if (payload.is_discarded()) return error_response(400, "invalid_json", "request body is not valid JSON");
    if (!payload.is_object()) return error_response(400, "invalid_json", "request body must be a JSON object");
  }
  try {
    if (parts.size() == 1 && parts[0] == "healthz") {
      return method == "GET" ? health() : not_allowed();
    }
    if (parts.size() == 1 && parts[0] == "keyphrases") {
      return method == "GET" ? list_keyphrases() : not_allowed();
    }
    if (!parts.empty() && parts[0] == "sessions") {
      if (parts.size() == 1) return method == "POST" ? create_session(payload) : not_allowed();
      if (parts.size() == 2) {
        if (method == "GET") return get_session(parts[1]);
        if (method == "DELETE") return close_session(parts[1]);
        return not_allowed();
      }
      if (parts.size() == 3 && parts[2] == "critiques") {
        return method == "POST" ? add_critique(parts[1], payload) : not_allowed();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return error_response(400, "bad_request", e.what());
  }
  return error_response(404, "not_found", "no such resource: " + std::string(path));
}

Response Service::create_session(const nlohmann::json& body) {
  const bool has_user = body.contains("user_id") && !body["user_id"].is_null();
  const bool has_items = body.contains("seed_items");
  const bool has_kps = body.contains("seed_keyphrases");
  if (!has_user && !has_items && !has_kps) {
    return error_response(400, "missing_input",
                          "provide user_id, seed_items or seed_keyphrases");
  }
  for (const char* key : {"seed_items", "seed_keyphrases"}) {
    if (body.contains(key) && !body[key].is_array()) {
      return error_response(400, "bad_request", std::string(key) + " must be an array");
    }
  }

  IndexList r, k;
  if (has_user) {
    if (!body["user_id"].is_string()) {
      return error_response(400, "bad_request", "user_id must be a string");
    }
    const auto user = dataset_.users.find(body["user_id"].get<std::string>());
    if (!user) {
      return error_response(404, "unknown_user",
                            "unknown user '" + body["user_id"].get<std::string>() + "'");
    }
    const auto row = dataset_.r_train.row(*user);
    r.assign(row.begin(), row.end());
  }
  std::vector<std::string> unknown;
  if (has_items) {
    r = set_union(r, resolve(body["seed_items"], dataset_.items, unknown));
    if (!unknown.empty()) return error_response(400, "unknown_item", "unknown items: " + join(unknown));
  }
  if (has_kps) {
    k = resolve(body["seed_keyphrases"], dataset_.keyphrases, unknown);
    if (!unknown.empty()) {
      return error_response(400, "unknown_keyphrase", "unknown keyphrases: " + join(unknown));
    }
  }
  if (r.empty() && k.empty()) {
    return error_response(400, "empty_seeds", "no interactions or keyphrases to start from");
  }

  OptionalRow r_in, k_in;
  if (!r.empty()) r_in = r;
  if (!k.empty()) k_in = k;
  auto entry = std::make_shared<Entry>();
  entry->session = std::make_unique<CritiqueSession>(
      model_, *blender_, latent_mean(model_, r_in, k_in), r,
      SessionOptions{config_.top_n, config_.top_k});
  entry->last_used = clock_();
  std::string id;
  {
    std::lock_guard lock(store_mutex_);
    id = new_id();
    sessions_[id] = entry;
  }
  std::lock_guard lock(entry->mutex);
  return {201, session_view(id, *entry->session)};
}

Response Service::add_critique(const std::string& id, const nlohmann::json& body) {
  const auto entry = find(id);
  if (!entry) return error_response(404, "unknown_session", "no session '" + id + "'");

  std::optional<Index> c;
  if (body.contains("keyphrase") && body["keyphrase"].is_string()) {
    c = dataset_.keyphrases.find(body["keyphrase"].get<std::string>());
    if (!c) {
      return error_response(400, "unknown_keyphrase",
                            "unknown keyphrase '" + body["keyphrase"].get<std::string>() + "'");
    }
  } else if (body.contains("keyphrase_index") && body["keyphrase_index"].is_number_unsigned()) {
    const auto idx = body["keyphrase_index"].get<std::uint64_t>();
    if (idx >= dataset_.n_keyphrases()) {
      return error_response(400, "unknown_keyphrase", "keyphrase index out of range");
    }
    c = static_cast<Index>(idx);
  } else {
    return error_response(400, "bad_request", "body must carry a keyphrase label");
  }

  std::lock_guard lock(entry->mutex);
  if (!entry->session->is_open()) {
    return error_response(409, "session_closed", "session '" + id + "' is closed");
  }
  entry->session->apply(*c);
  entry->last_used = clock_();
  return {200, session_view(id, *entry->session)};
}

Response Service::get_session(const std::string& id) {
  const auto entry = find(id);
  if (!entry) return error_response(404, "unknown_session", "no session '" + id + "'");
  std::lock_guard lock(entry->mutex);
  entry->last_used = clock_();
  return {200, session_view(id, *entry->session)};
}

Response Service::close_session(const std::string& id) {
  const auto entry = find(id);
  if (!entry) return error_response(404, "unknown_session", "no session '" + id + "'");
  std::lock_guard lock(entry->mutex);
  entry->session->close();
  entry->last_used = clock_();
  return {200, session_view(id, *entry->session)};
}

Response Service::list_keyphrases() const {
  auto arr = nlohmann::json::array();
  const auto& ids = dataset_.keyphrases.ids();
  for (std::size_t i = 0; i < ids.size(); ++i) arr.push_back({{"index", i}, {"label", ids[i]}});
  return {200, {{"keyphrases", std::move(arr)}}};
}

Response Service::health() const {
  return {200,
          {{"status", "ok"},
           {"users", dataset_.n_users()},
           {"items", dataset_.n_items()},
           {"keyphrases", dataset_.n_keyphrases()},
           {"latent", model_.dims().latent},
           {"blender", blender_->name()},
           {"sessions", session_count()},
           {"model_digest", parameter_digest(model_)}}};
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) {
  std::lock_guard lock(store_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

nlohmann::json Service::session_view(const std::string& id, const CritiqueSession& s) const {
  const auto& last = s.history().back();
  auto items = nlohmann::json::array();
  for (const auto& r : last.items) {
    items.push_back({{"item", dataset_.items.id_of(r.index)}, {"index", r.index}, {"score", r.score}});
  }
  auto explanation = nlohmann::json::array();
  for (const auto& e : last.explanation) {
    explanation.push_back(
        {{"keyphrase", dataset_.keyphrases.id_of(e.index)}, {"index", e.index}, {"score", e.score}});
  }
  auto critiques = nlohmann::json::array();
  for (Index c : s.critiques()) critiques.push_back(dataset_.keyphrases.id_of(c));
  return {{"session_id", id},
          {"step", s.step()},
          {"open", s.is_open()},
          {"critiques", std::move(critiques)},
          {"recommendations", std::move(items)},
          {"explanation", std::move(explanation)}};
}

std::size_t Service::evict_expired() {
  const auto now = clock_();
  std::lock_guard lock(store_mutex_);
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock entry_lock(it->second->mutex, std::try_to_lock);
    if (entry_lock.owns_lock() && now - it->second->last_used > config_.session_ttl) {
      entry_lock.unlock();
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t Service::session_count() const {
  std::lock_guard lock(store_mutex_);
  return sessions_.size();
}

std::string Service::new_id() {
  id_state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t x = id_state_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x ^= x >> 31;
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << x;
  return out.str();
}

}  // namespace critiq
