// Copyright 2026 The ddab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ddab/service.h"

#include <fstream>
#include <sstream>
#include <thread>

#include "ddab/error.h"
#include "doctest.h"
#include "httplib.h"

namespace ddab {
namespace {

std::string GraphText(const std::string& name) {
  std::ifstream in(std::string(DDAB_DATA_DIR) + "/graphs/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json CreateBody(const std::string& graph, const std::string& x, Json t, const std::string& human) {
  return {{"graph", GraphText(graph)}, {"X", x}, {"Y", 1}, {"T", t}, {"human", human}};
}

TEST_CASE("rational wire form") {
  Json j = RationalToJson(Fraction(7, 2));
  CHECK(j["num"] == 7);
  CHECK(j["den"] == 2);
  CHECK(j["decimal"] == "3.5");
  CHECK(RationalFromJson(j) == Fraction(7, 2));
  CHECK(RationalFromJson("3.5") == Fraction(7, 2));
  CHECK(RationalFromJson(Json(3)) == 3);
  CHECK(RationalFromJson(Json(0.25)) == Fraction(1, 4));
  CHECK_THROWS_AS(RationalFromJson(Json{{"num", 1}, {"den", 0}}), ValidationError);
}

TEST_CASE("human defender follows the hints to a defended finish") {
  MatchService svc;
  Json st = svc.CreateMatch(CreateBody("fig6.txt", "3", 3, "defender"));
  const std::string id = st["id"];
  CHECK(st["phase"] == "awaiting-defender");
  CHECK(st["history"].size() == 1);  // the engine attacker's placement
  while (st["to_move"] == "defender") {
    Json hints = svc.GetHints(id);
    CHECK(hints["pending"] == "defender");
    CHECK(hints["best_guarantee"]["kind"] == "finite");
    st = svc.SubmitMove(id, {{"next", hints["recommended"]["next"]}});
  }
  CHECK(st["outcome"]["kind"] == "defended");
  CHECK(st["outcome"]["winner"] == "defender");
  GameTrace trace = svc.Trace(id);
  CHECK(trace.defender_policy == "human");
  CHECK_FALSE(ReplayTrace(GameTrace::FromJsonLines(trace.ToJsonLines())).has_value());
  CHECK(svc.cache().size() == 1);
}

TEST_CASE("rejections name the violated constraint") {
  MatchService svc;
  Json st = svc.CreateMatch(CreateBody("fig6.txt", "3", "inf", "attacker"));
  const std::string id = st["id"];
  CHECK(st["phase"] == "awaiting-attacker-initial");
  auto rejected = [&](const Json& body) -> std::string {
    try {
      svc.SubmitMove(id, body);
    } catch (const ServiceError& e) {
      return std::to_string(e.status()) + " " + e.what();
    }
    return "accepted";
  };
  CHECK(rejected({{"next", {1, 1, 0}}}).rfind("422 column-sum:", 0) == 0);
  CHECK(rejected({{"player", "defender"}, {"next", {1, 1, 1}}}).rfind("409 turn:", 0) == 0);
  st = svc.SubmitMove(id, {{"next", {1, 0, 0}}});
  // The engine defender answered; now the attacker on node 1 can only go to 3.
  CHECK(st["to_move"] == "attacker");
  CHECK(rejected({{"flows", {{{"from", 1}, {"to", 2}, {"amount", 1}}}}}).rfind("422 adjacency", 0) ==
        0);
  CHECK(rejected({{"flows", Json::array()}}).rfind("422 adjacency", 0) == 0);
  CHECK(rejected({{"next", {0, 1, 0}}}).rfind("422 reachability", 0) == 0);
  Json hints = svc.GetHints(id);
  CHECK(hints["pending"] == "attacker");
  CHECK(hints["immediate_breach_available"] == false);
  st = svc.SubmitMove(id, {{"flows", {{{"from", 1}, {"to", 3}, {"amount", "1"}}}}});
  CHECK(st["attacker"][2]["num"] == 1);
  CHECK(st["outcome"]["kind"] == "ongoing");
  CHECK_THROWS_AS(svc.GetMatch("nope"), ServiceError);
}

TEST_CASE("engine attacker opens and wins below the critical ratio") {
  MatchService svc;
  Json st = svc.CreateMatch(CreateBody("fig6.txt", "1", 2, "defender"));
  const std::string id = st["id"];
  Json hints = svc.GetHints(id);
  CHECK(hints["best_guarantee"]["kind"] == "none");
  CHECK_FALSE(hints["warnings"].empty());
  st = svc.SubmitMove(id, {{"next", hints["recommended"]["next"]}});
  CHECK(st["outcome"]["kind"] == "breached");
  CHECK(st["outcome"]["time"] == 0);
}

TEST_CASE("safe-set lookup by digest") {
  MatchService svc;
  Json st = svc.CreateMatch(CreateBody("fig6.txt", "3", "inf", "attacker"));
  Json q = svc.GraphQSets(st["graph_digest"], 1, 4);
  CHECK(q["k_infinity"] == 4);
  CHECK(q["beta"]["num"] == 3);
  CHECK_FALSE(q["vertices"].empty());
  CHECK(svc.GraphQSets(st["graph_digest"], 1, 40)["effective_k"] == 4);
  CHECK_THROWS_AS(svc.GraphQSets("0000000000000000", 1, 0), ServiceError);
  CHECK(svc.EvictGraph(st["graph_digest"]) == 1);
  CHECK(svc.cache().size() == 0);
}

TEST_CASE("http round trip with event stream") {
  MatchService svc;
  HttpServer server(svc);
  const int port = server.BindToAnyPort("127.0.0.1");
  REQUIRE(port > 0);
  std::thread serving([&] { server.ListenAfterBind(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(10, 0);
  auto health = cli.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);

  auto created = cli.Post("/matches", CreateBody("fig6.txt", "3", 1, "defender").dump(),
                          "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  Json st = Json::parse(created->body);
  const std::string id = st["id"];

  auto bad = cli.Post("/matches/" + id + "/moves", R"({"next": [1, 1]})", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 422);
  CHECK(Json::parse(bad->body)["error"].get<std::string>().rfind("dimension:", 0) == 0);
  CHECK(cli.Get("/matches/zzz")->status == 404);

  // Play to the end, then read the whole event stream.
  while (st["to_move"] == "defender") {
    auto hints = cli.Get("/matches/" + id + "/hints");
    REQUIRE(hints);
    Json h = Json::parse(hints->body);
    auto moved = cli.Post("/matches/" + id + "/moves",
                          Json{{"next", h["recommended"]["next"]}}.dump(), "application/json");
    REQUIRE(moved);
    REQUIRE(moved->status == 200);
    st = Json::parse(moved->body);
  }
  CHECK(st["outcome"]["kind"] == "defended");
  auto events = cli.Get("/matches/" + id + "/events");
  REQUIRE(events);
  CHECK(events->get_header_value("Content-Type").rfind("text/event-stream", 0) == 0);
  CHECK(events->body.find("event: created") != std::string::npos);
  CHECK(events->body.find("event: finished") != std::string::npos);

  auto q = cli.Get("/graphs/" + st["graph_digest"].get<std::string>() + "/qsets?node=1&k=0");
  REQUIRE(q);
  CHECK(q->status == 200);
  auto trace = cli.Get("/matches/" + id + "/trace");
  REQUIRE(trace);
  CHECK_FALSE(ReplayTrace(GameTrace::FromJsonLines(trace->body)).has_value());

  server.Stop();
  serving.join();
}

TEST_CASE("six-node session: engine attacker opens on node 3 and the hints count down") {
  MatchService svc;
  Json st = svc.CreateMatch(CreateBody("fig8.txt", "3", 2, "defender"));
  const std::string id = st["id"];
  CHECK(st["attacker"][2]["num"] == 1);
  CHECK(st["history"][0]["player"] == "attacker");
  std::vector<std::string> guarantees;
  while (st["to_move"] == "defender") {
    Json h = svc.GetHints(id);
    guarantees.push_back(h["best_guarantee"]["text"]);
    if (st["time"] == 1) {
      // No allocation reachable at t = 1 survives the remaining steps.
      for (const auto& o : h["options"]) {
        if (o["k"] >= 1) CHECK(o["available"] == false);
      }
    }
    st = svc.SubmitMove(id, {{"next", h["recommended"]["next"]}});
  }
  CHECK(guarantees.front() == "1");
  CHECK(st["outcome"]["kind"] == "breached");
  CHECK(st["outcome"]["time"] == 2);

  Json mine = svc.CreateMatch(CreateBody("fig8.txt", "7/2", 2, "attacker"));
  const std::string mid = mine["id"];
  mine = svc.SubmitMove(mid, {{"next", {0, 0, 1, 0, 0, 0}}});
  CHECK(mine["defender"][5]["den"] == 2);
  Json hints = svc.GetHints(mid);
  for (const auto& c : hints["candidates"]) CHECK(c["breach_within"].is_null());
}

}  // namespace
}  // namespace ddab
