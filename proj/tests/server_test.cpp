// Copyright 2026 The ontoenrich Authors.
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

#include <atomic>
#include <thread>

#include "ontoenrich/review.hpp"
#include "ontoenrich/server.hpp"
#include "test_util.hpp"

// After the Eigen-exposing headers.
#include <httplib.h>
#include <json.hpp>

namespace ontoenrich {
namespace {

using nlohmann::json;
using testing::TempDir;

CandidateTriple triple(std::string s, LabelKind p, std::string o, double conf) {
  CandidateTriple t;
  t.subject = std::move(s);
  t.predicate = p;
  t.object = std::move(o);
  t.confidence = conf;
  t.provenance = {"https://example.org/page", {"s1"}, false};
  return t;
}

class ServerTest : public ::testing::Test {
 protected:
  void start(ServerOptions options = {}, EnrichJobRunner runner = {}) {
    ReviewStoreOptions o;
    o.dir = tmp_ / "store";
    o.seedOntology = tmp_.write("seed.tsv", "firewall\thypernym\tsecurity control\n");
    service_ = std::make_unique<ReviewService>(o, [] { return std::string("T"); });
    service_->enqueue({{triple("acme shield", LabelKind::kHypernym, "firewall", 0.9),
                        {{"s1", "Acme Shield is a firewall."}}},
                       {triple("worm", LabelKind::kHypernym, "malware", 0.6), {}}});
    server_ = std::make_unique<ReviewServer>(*service_, std::move(options), std::move(runner));
    port_ = server_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->listen(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string first_id() { return entry_id(triple("acme shield", LabelKind::kHypernym, "firewall", 0)); }

  TempDir tmp_;
  std::unique_ptr<ReviewService> service_;
  std::unique_ptr<ReviewServer> server_;
  std::thread thread_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServerTest, HealthAndStats) {
  start();
  auto res = client_->Get("/api/v1/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client_->Get("/api/v1/ontology/stats");
  ASSERT_TRUE(res);
  const auto j = json::parse(res->body);
  EXPECT_EQ(j["relations"], 1);
  EXPECT_EQ(j["pending"], 2);
}

TEST_F(ServerTest, ListsPendingCandidatesWithPagination) {
  start();
  auto res = client_->Get("/api/v1/candidates?limit=1&offset=1");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const auto j = json::parse(res->body);
  EXPECT_EQ(j["total"], 2);
  ASSERT_EQ(j["entries"].size(), 1u);
  EXPECT_EQ(j["entries"][0]["subject"], "worm");

  res = client_->Get("/api/v1/candidates?min_confidence=0.8");
  EXPECT_EQ(json::parse(res->body)["total"], 1);
  res = client_->Get("/api/v1/candidates?limit=-3");
  EXPECT_EQ(res->status, 400);
  res = client_->Get("/api/v1/candidates?predicate=SIBLING");
  EXPECT_EQ(res->status, 400);
}

TEST_F(ServerTest, GetCandidateIncludesSentences) {
  start();
  auto res = client_->Get("/api/v1/candidates/" + first_id());
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const auto j = json::parse(res->body);
  EXPECT_EQ(j["sentences"][0]["text"], "Acme Shield is a firewall.");
  EXPECT_EQ(client_->Get("/api/v1/candidates/cmissing")->status, 404);
}

TEST_F(ServerTest, DecisionFlow) {
  start();
  const std::string path = "/api/v1/candidates/" + first_id() + "/decision";
  auto res = client_->Post(path, R"({"decision":"accept","reviewer":"ann"})", "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  auto j = json::parse(res->body);
  EXPECT_EQ(j["entry"]["status"], "accepted");
  EXPECT_FALSE(j["replayed"].get<bool>());
  const auto version = j["version"].get<std::uint64_t>();

  res = client_->Post(path, R"({"decision":"accept","reviewer":"ann"})", "application/json");
  EXPECT_EQ(res->status, 200);
  EXPECT_TRUE(json::parse(res->body)["replayed"].get<bool>());

  res = client_->Post(path, R"({"decision":"reject"})", "application/json");
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body)["entry"]["status"], "accepted");

  res = client_->Get("/api/v1/ontology/changes?since=" + std::to_string(version - 1));
  j = json::parse(res->body);
  ASSERT_EQ(j["changes"].size(), 1u);
  EXPECT_EQ(j["changes"][0]["subject"], "acme shield");
  EXPECT_EQ(j["changes"][0]["op"], "review:" + first_id());
}

TEST_F(ServerTest, MalformedDecisions) {
  start();
  const std::string path = "/api/v1/candidates/" + first_id() + "/decision";
  EXPECT_EQ(client_->Post(path, "nope", "application/json")->status, 400);
  EXPECT_EQ(client_->Post(path, R"({"decision":"maybe"})", "application/json")->status, 400);
  EXPECT_EQ(client_->Post(path, R"({"decision":"accept-with-predicate"})", "application/json")
                ->status,
            400);
  EXPECT_EQ(client_->Post("/api/v1/candidates/cmissing/decision", R"({"decision":"accept"})",
                          "application/json")
                ->status,
            404);
  auto res = client_->Post(path, R"({"decision":"accept-with-predicate","predicate":"HYPONYM"})",
                           "application/json");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["entry"]["original_predicate"], "HYPERNYM");
}

TEST_F(ServerTest, BearerTokenGuardsApiButNotHealth) {
  start({"s3cret", std::nullopt});
  EXPECT_EQ(client_->Get("/api/v1/health")->status, 200);
  EXPECT_EQ(client_->Get("/api/v1/candidates")->status, 401);
  httplib::Headers wrong{{"Authorization", "Bearer nope"}};
  EXPECT_EQ(client_->Get("/api/v1/candidates", wrong)->status, 401);
  httplib::Headers right{{"Authorization", "Bearer s3cret"}};
  EXPECT_EQ(client_->Get("/api/v1/candidates", right)->status, 200);
}

TEST_F(ServerTest, EnrichJobsRunInBackground) {
  std::atomic<int> calls{0};
  start({}, [&](const std::string& url) -> std::size_t {
    ++calls;
    if (url == "https://bad.example") throw UpstreamError("fetch failed");
    return 3;
  });
  auto res = client_->Post("/api/v1/enrich", R"({"url":"https://good.example"})", "application/json");
  ASSERT_EQ(res->status, 202);
  const std::string good = json::parse(res->body)["id"];
  res = client_->Post("/api/v1/enrich", R"({"url":"https://bad.example"})", "application/json");
  const std::string bad = json::parse(res->body)["id"];
  EXPECT_EQ(client_->Post("/api/v1/enrich", R"({"url":""})", "application/json")->status, 400);
  server_->drain_jobs();
  EXPECT_EQ(calls.load(), 2);
  auto j = json::parse(client_->Get("/api/v1/jobs/" + good)->body);
  EXPECT_EQ(j["status"], "done");
  EXPECT_EQ(j["queued"], 3);
  j = json::parse(client_->Get("/api/v1/jobs/" + bad)->body);
  EXPECT_EQ(j["status"], "failed");
  EXPECT_EQ(j["message"], "fetch failed");
  EXPECT_EQ(client_->Get("/api/v1/jobs/job-99")->status, 404);
}

TEST_F(ServerTest, EnrichWithoutModelIsUpstreamError) {
  start();
  EXPECT_EQ(client_->Post("/api/v1/enrich", R"({"url":"https://x"})", "application/json")->status,
            502);
}

TEST_F(ServerTest, ServesStaticAssets) {
  ServerOptions o;
  o.staticDir = tmp_.path() / "ui";
  tmp_.write("ui/index.html", "<h1>review</h1>");
  start(o);
  auto res = client_->Get("/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<h1>review</h1>");
}

}  // namespace
}  // namespace ontoenrich
