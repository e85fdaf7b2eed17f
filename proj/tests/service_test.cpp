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

#include <gtest/gtest.h>

#include <httplib.h>

#include <fstream>
#include <thread>

#include "critiq/model/checkpoint.hpp"
#include "critiq/service/http_server.hpp"
#include "critiq/service/service.hpp"
#include "support/fixtures.hpp"

namespace critiq {
namespace {

using nlohmann::json;

struct FakeClock {
  std::shared_ptr<std::chrono::steady_clock::time_point> now =
      std::make_shared<std::chrono::steady_clock::time_point>();
  Service::Clock fn() const {
    auto n = now;
    return [n] { return *n; };
  }
};

std::unique_ptr<Service> make_service(ServiceConfig config = {}, Service::Clock clock = {}) {
  const auto& toy = testing::shared_toy();
  return std::make_unique<Service>(toy.dataset, toy.model, std::make_unique<UacBlender>(),
                                   config, std::move(clock));
}

Response post(Service& s, const std::string& path, const json& body) {
  return s.handle("POST", path, body.dump());
}

void expect_error(const Response& r, int status, const std::string& code) {
  EXPECT_EQ(r.status, status) << r.body.dump();
  EXPECT_EQ(r.body.value("code", ""), code) << r.body.dump();
  EXPECT_TRUE(r.body.contains("message"));
}

void expect_descending(const json& recs) {
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double a = recs[i - 1]["score"], b = recs[i]["score"];
    EXPECT_TRUE(a > b || (a == b && recs[i - 1]["index"] < recs[i]["index"]));
  }
}

TEST(Service, HealthAndKeyphrases) {
  auto s = make_service();
  const auto h = s->handle("GET", "/healthz", "");
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(h.body["status"], "ok");
  EXPECT_EQ(h.body["items"], 100);
  const auto k = s->handle("GET", "/keyphrases", "");
  ASSERT_EQ(k.status, 200);
  ASSERT_EQ(k.body["keyphrases"].size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(k.body["keyphrases"][i]["index"], i);
    EXPECT_EQ(k.body["keyphrases"][i]["label"], s->dataset().keyphrases.id_of(i));
  }
}

TEST(Service, SessionStepsAdvance) {
  auto s = make_service({5, 3});
  const auto user = s->dataset().users.id_of(0);
  const auto created = post(*s, "/sessions", {{"user_id", user}});
  ASSERT_EQ(created.status, 201) << created.body.dump();
  EXPECT_EQ(created.body["step"], 0);
  EXPECT_EQ(created.body["recommendations"].size(), 5u);
  EXPECT_EQ(created.body["explanation"].size(), 3u);
  expect_descending(created.body["recommendations"]);
  const std::string id = created.body["session_id"];
  const auto train = s->dataset().r_train.row(0);
  for (const auto& r : created.body["recommendations"]) {
    EXPECT_FALSE(std::binary_search(train.begin(), train.end(), r["index"].get<Index>()));
  }

  const auto kp0 = s->dataset().keyphrases.id_of(0);
  const auto one = post(*s, "/sessions/" + id + "/critiques", {{"keyphrase", kp0}});
  ASSERT_EQ(one.status, 200) << one.body.dump();
  EXPECT_EQ(one.body["step"], 1);
  const auto two = post(*s, "/sessions/" + id + "/critiques", {{"keyphrase_index", 3}});
  ASSERT_EQ(two.status, 200);
  EXPECT_EQ(two.body["step"], 2);
  EXPECT_EQ(two.body["critiques"],
            json::array({kp0, s->dataset().keyphrases.id_of(3)}));
  expect_descending(two.body["recommendations"]);

  const auto got = s->handle("GET", "/sessions/" + id, "");
  EXPECT_EQ(got.status, 200);
  EXPECT_EQ(got.body, two.body);
}

TEST(Service, SessionsAreIsolated) {
  auto s = make_service();
  const auto user = s->dataset().users.id_of(2);
  const std::string a = post(*s, "/sessions", {{"user_id", user}}).body["session_id"];
  const std::string b = post(*s, "/sessions", {{"user_id", user}}).body["session_id"];
  EXPECT_NE(a, b);
  post(*s, "/sessions/" + a + "/critiques", {{"keyphrase_index", 1}});
  EXPECT_EQ(s->handle("GET", "/sessions/" + a, "").body["step"], 1);
  EXPECT_EQ(s->handle("GET", "/sessions/" + b, "").body["step"], 0);
  EXPECT_EQ(s->session_count(), 2u);
}

TEST(Service, ColdStartFromSeeds) {
  auto s = make_service();
  const auto& ds = s->dataset();
  const auto kp = post(*s, "/sessions",
                       {{"seed_keyphrases", {ds.keyphrases.id_of(0), ds.keyphrases.id_of(4),
                                             ds.keyphrases.id_of(8)}}});
  ASSERT_EQ(kp.status, 201);
  EXPECT_EQ(kp.body["recommendations"].size(), 20u);
  const auto items = post(*s, "/sessions", {{"seed_items", {ds.items.id_of(7)}}});
  ASSERT_EQ(items.status, 201);
  for (const auto& r : items.body["recommendations"]) EXPECT_NE(r["index"], 7);
}

TEST(Service, ErrorCodes) {
  auto s = make_service();
  const auto user = s->dataset().users.id_of(0);
  expect_error(s->handle("POST", "/sessions", "{not json"), 400, "invalid_json");
  expect_error(s->handle("POST", "/sessions", "[1]"), 400, "invalid_json");
  expect_error(post(*s, "/sessions", json::object()), 400, "missing_input");
  expect_error(post(*s, "/sessions", {{"user_id", "nobody"}}), 404, "unknown_user");
  expect_error(post(*s, "/sessions", {{"seed_items", {"ghost"}}}), 400, "unknown_item");
  expect_error(post(*s, "/sessions", {{"seed_keyphrases", {"ghost"}}}), 400,
               "unknown_keyphrase");
  expect_error(post(*s, "/sessions", {{"seed_items", json::array()}}), 400, "empty_seeds");
  expect_error(post(*s, "/sessions", {{"seed_items", "x"}}), 400, "bad_request");
  expect_error(s->handle("GET", "/sessions/missing", ""), 404, "unknown_session");
  expect_error(post(*s, "/sessions/missing/critiques", {{"keyphrase_index", 0}}), 404,
               "unknown_session");
  expect_error(s->handle("PUT", "/healthz", ""), 405, "method_not_allowed");
  expect_error(s->handle("GET", "/nowhere", ""), 404, "not_found");

  const std::string id = post(*s, "/sessions", {{"user_id", user}}).body["session_id"];
  const auto path = "/sessions/" + id + "/critiques";
  expect_error(post(*s, path, {{"keyphrase", "ghost"}}), 400, "unknown_keyphrase");
  expect_error(post(*s, path, {{"keyphrase_index", 999}}), 400, "unknown_keyphrase");
  expect_error(post(*s, path, {{"other", 1}}), 400, "bad_request");
  const auto closed = s->handle("DELETE", "/sessions/" + id, "");
  EXPECT_EQ(closed.status, 200);
  EXPECT_EQ(closed.body["open"], false);
  expect_error(post(*s, path, {{"keyphrase_index", 0}}), 409, "session_closed");
}

TEST(Service, IdleSessionsExpire) {
  FakeClock clock;
  auto s = make_service({20, 10, std::chrono::seconds(60)}, clock.fn());
  const auto user = s->dataset().users.id_of(0);
  const std::string a = post(*s, "/sessions", {{"user_id", user}}).body["session_id"];
  *clock.now += std::chrono::seconds(40);
  const std::string b = post(*s, "/sessions", {{"user_id", user}}).body["session_id"];
  *clock.now += std::chrono::seconds(30);
  EXPECT_EQ(s->evict_expired(), 1u);
  expect_error(s->handle("GET", "/sessions/" + a, ""), 404, "unknown_session");
  EXPECT_EQ(s->handle("GET", "/sessions/" + b, "").status, 200);
}

TEST(Service, RequestsNeverChangeTheModel) {
  auto s = make_service();
  const auto before = parameter_digest(s->model());
  const auto user = s->dataset().users.id_of(5);
  const std::string id = post(*s, "/sessions", {{"user_id", user}}).body["session_id"];
  for (Index c = 0; c < 6; ++c) post(*s, "/sessions/" + id + "/critiques", {{"keyphrase_index", c}});
  s->handle("DELETE", "/sessions/" + id, "");
  EXPECT_EQ(parameter_digest(s->model()), before);
  EXPECT_EQ(s->handle("GET", "/healthz", "").body["model_digest"], before);
}

TEST(HttpServer, EndToEndWithStaticAssets) {
  const auto ui = testing::scratch_dir("ui");
  std::ofstream(ui / "index.html") << "<html>critiq</html>";
  auto service = make_service();
  HttpServer server(*service, ui);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread runner([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  for (int i = 0; i < 100 && !server.is_running(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }

  const auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["status"], "ok");

  const auto page = client.Get("/index.html");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->status, 200);
  EXPECT_NE(page->body.find("critiq"), std::string::npos);

  const json body = {{"user_id", service->dataset().users.id_of(0)}};
  const auto created = client.Post("/sessions", body.dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const auto view = json::parse(created->body);
  const std::string id = view["session_id"];
  const auto critiqued = client.Post("/sessions/" + id + "/critiques",
                                     json{{"keyphrase_index", 2}}.dump(), "application/json");
  ASSERT_TRUE(critiqued);
  EXPECT_EQ(json::parse(critiqued->body)["step"], 1);
  const auto deleted = client.Delete("/sessions/" + id);
  ASSERT_TRUE(deleted);
  EXPECT_EQ(deleted->status, 200);
  const auto missing = client.Get("/sessions/zzz");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(json::parse(missing->body)["code"], "unknown_session");

  server.stop();
  runner.join();
}

}  // namespace
}  // namespace critiq
