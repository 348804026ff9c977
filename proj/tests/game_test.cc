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

#include "ddab/game.h"

#include <random>

#include "ddab/error.h"
#include "ddab/qsets.h"
#include "doctest.h"

namespace ddab {
namespace {

Graph Load(const std::string& name) {
  return LoadGraphFile(std::string(DDAB_DATA_DIR) + "/graphs/" + name);
}

std::shared_ptr<const Strategist> MakeStrategist(const Graph& g, const Rational& x,
                                                 std::optional<int> horizon = std::nullopt) {
  QPropOptions opts;
  opts.horizon = horizon;
  return std::make_shared<const Strategist>(std::make_shared<const QSetFamily>(QProp(g, opts)),
                                            x, 1);
}

TEST_CASE("breach requires strict excess") {
  CHECK(CheckBreach({1, 0, 2}, {0, 1, 0}) == std::optional<int>(1));
  CHECK_FALSE(CheckBreach({1, 1, 0}, {1, 1, 0}).has_value());
  CHECK(CheckBreach({0, 0, 0}, {0, Fraction(1, 3), Fraction(1, 2)}) == std::optional<int>(1));
  CHECK(CheckBreach({Fraction(1, 2), 0}, {Fraction(2, 3), 0}) == std::optional<int>(0));
}

TEST_CASE("match validates every move before applying it") {
  Graph g = Load("fig6.txt");
  Match m(g, 3, 1, 2);
  CHECK(m.phase() == Phase::kAwaitingAttackerInitial);
  CHECK(m.Validate(Player::kDefender, {{1, 1, 1}})->rfind("turn:", 0) == 0);
  CHECK(m.Play(Player::kAttacker, {{1, 0}})->rfind("dimension:", 0) == 0);
  CHECK(m.Play(Player::kAttacker, {{2, -1, 0}})->rfind("nonnegativity:", 0) == 0);
  CHECK(m.Play(Player::kAttacker, {{1, 1, 0}})->rfind("column-sum:", 0) == 0);
  CHECK(m.phase() == Phase::kAwaitingAttackerInitial);
  CHECK_FALSE(m.Play(Player::kAttacker, {{1, 0, 0}}).has_value());
  CHECK(m.time() == 0);
  CHECK(m.ToMove() == Player::kDefender);
  CHECK_FALSE(m.Play(Player::kDefender, {{0, 0, 3}}).has_value());
  // Node 1 only reaches node 3.
  CHECK(m.Play(Player::kAttacker, {{0, 1, 0}})->rfind("reachability:", 0) == 0);
  TransitionMatrix bad(3, ActionRole::kAttacker);
  bad.at(0, 0) = 1;
  bad.at(1, 1) = 1;
  bad.at(2, 2) = 1;
  CHECK(m.Play(Player::kAttacker, {{1, 0, 0}, bad})->rfind("adjacency", 0) == 0);
  CHECK_FALSE(m.Play(Player::kAttacker, {{0, 0, 1}}).has_value());
  CHECK(m.phase() == Phase::kAwaitingDefender);
  CHECK(m.time() == 1);
  CHECK(m.AttackerAt(-1) == RationalVector{1, 0, 0});
  CHECK(m.AttackerAt(0) == RationalVector{0, 0, 1});
  // The attacker lands on node 3 which holds 3 units; moving them all to 2
  // leaves node 1 exposed.
  CHECK_FALSE(m.Play(Player::kDefender, {{0, 3, 0}}).has_value());
  REQUIRE(m.history().back().action.has_value());
  CHECK(m.history().back().action->IsAdmissible(g));
  CHECK_FALSE(m.Play(Player::kAttacker, {{0, 1, 0}}).has_value());
  CHECK(m.phase() == Phase::kAwaitingDefender);
  CHECK_FALSE(m.Play(Player::kDefender, {{3, 0, 0}}).has_value());
  CHECK_FALSE(m.Play(Player::kAttacker, {{0, 0, 1}}).has_value());
  CHECK(m.phase() == Phase::kFinished);
  CHECK(m.outcome().kind == Outcome::Kind::kBreached);
  CHECK(m.outcome().time == 2);
  CHECK(m.outcome().node == std::optional<int>(2));
  CHECK(m.Validate(Player::kDefender, {{3, 0, 0}})->rfind("turn:", 0) == 0);
}

TEST_CASE("engine defender holds at the critical ratio") {
  for (const char* name : {"fig6.txt", "ring5_chord_loop3.txt", "complete3.txt", "ring5.txt"}) {
    CAPTURE(name);
    Graph g = Load(name);
    auto probe = MakeStrategist(g, 0);
    const Rational alpha = *Crr(probe->qsets()).alpha_infinity;
    auto s = MakeStrategist(g, alpha);
    EngineDefender d(s);
    EngineAttacker a(s);
    GameTrace trace = RunMatch(g, alpha, 1, 8, d, a);
    CHECK(trace.outcome.kind == Outcome::Kind::kDefended);
    CHECK(trace.outcome.winner == std::optional<Player>(Player::kDefender));
  }
}

TEST_CASE("engine attacker breaches below the critical ratio within its guarantee") {
  for (const char* name : {"fig6.txt", "ring5_chord.txt", "complete3.txt"}) {
    CAPTURE(name);
    Graph g = Load(name);
    auto probe = MakeStrategist(g, 0);
    const Rational alpha = *Crr(probe->qsets()).alpha_infinity;
    auto s = MakeStrategist(g, alpha - 1);
    const Guarantee promise = s->AttackerInit(std::nullopt).guarantee;
    REQUIRE(promise.kind == Guarantee::Kind::kFinite);
    EngineDefender d(s);
    EngineAttacker a(s);
    GameTrace trace = RunMatch(g, alpha - 1, 1, std::nullopt, d, a);
    CHECK(trace.outcome.kind == Outcome::Kind::kBreached);
    CHECK(trace.outcome.time <= promise.k);
  }
}

TEST_CASE("illegal recorded move forfeits") {
  Graph g = Load("fig6.txt");
  auto s = MakeStrategist(g, 3);
  EngineDefender d(s);
  RecordedPolicy a("script", {{{1, 0, 0}}, {{0, 1, 0}}});
  GameTrace trace = RunMatch(g, 3, 1, 4, d, a);
  CHECK(trace.outcome.kind == Outcome::Kind::kForfeit);
  CHECK(trace.outcome.winner == std::optional<Player>(Player::kDefender));
  CHECK(trace.outcome.detail.find("reachability") != std::string::npos);
}

TEST_CASE("trace round trip and replay") {
  Graph g = Load("fig6.txt");
  auto s = MakeStrategist(g, 3, 5);
  EngineDefender d(s);
  RecordedPolicy a("script", {{{1, 0, 0}}, {{0, 0, 1}}, {{0, 1, 0}}, {{1, 0, 0}}, {{0, 0, 1}},
                              {{0, 1, 0}}, {{0, 0, 1}}});
  GameTrace trace = RunMatch(g, 3, 1, 5, d, a);
  CHECK(trace.outcome.kind == Outcome::Kind::kDefended);
  const std::string text = trace.ToJsonLines();
  GameTrace parsed = GameTrace::FromJsonLines(text);
  CHECK(parsed.ToJsonLines() == text);
  CHECK(parsed.graph_digest == g.Digest());
  CHECK_FALSE(ReplayTrace(parsed).has_value());
  // Tampering with a recorded defender state is detected.
  for (auto& turn : parsed.turns) {
    if (turn.player == Player::kDefender && turn.time == 2) {
      std::swap(turn.state[0], turn.state[2]);
      break;
    }
  }
  CHECK(ReplayTrace(parsed).has_value());
  CHECK_THROWS_AS(GameTrace::FromJsonLines("{\"record\":\"turn\"}\n"), ValidationError);
}

TEST_CASE("oracle compositions") {
  CHECK(Oracle::Compositions(3, 2).size() == 6);
  CHECK(Oracle::Compositions(4, 3).size() == 20);
  CHECK(Oracle::Compositions(1, 5) == std::vector<std::vector<int>>{{5}});
}

TEST_CASE("oracle thresholds on small graphs") {
  CHECK(OracleCrr(Load("complete3.txt"), 2) == 3);
  CHECK(OracleCrr(Load("ring5.txt"), 3) == 1);
  CHECK(OracleCrr(Load("fig6.txt"), 4) == 3);
  Oracle small(Load("fig6.txt"), 2, 1, 4, false);
  CHECK_FALSE(small.DefenderWins());
  CHECK(small.memo_size() > 0);
}

TEST_CASE("equality at every node defends") {
  CHECK_FALSE(CheckBreach({3, 1, 2}, {1, 0, 2}).has_value());
  CHECK(CheckBreach({0, 1}, {1, 0}) == std::optional<int>(0));
}

TEST_CASE("six-node game trees") {
  Graph g = Load("fig8.txt");
  for (const Rational& x : {Rational(3), Fraction(7, 2)}) {
    auto s = MakeStrategist(g, x, 2);
    EngineDefender d(s);
    EngineAttacker a(s);
    GameTrace t = RunMatch(g, x, 1, 2, d, a);
    REQUIRE_FALSE(t.turns.empty());
    CHECK(t.turns.front().state == RationalVector{0, 0, 1, 0, 0, 0});
    if (x == 3) {
      CHECK(t.outcome.kind == Outcome::Kind::kBreached);
      CHECK(t.outcome.time == 2);
    } else {
      CHECK(t.outcome.kind == Outcome::Kind::kDefended);
      CHECK(t.turns[1].state == RationalVector{0, 1, 1, 0, 1, Fraction(1, 2)});
    }
  }
  Oracle three(g, 3, 1, 2, false);
  CHECK_FALSE(three.Solve().at({0, 0, 1, 0, 0, 0}));
  CHECK(OracleCrr(g, 2) == 4);
}

TEST_CASE("patrol budget always defends") {
  for (const char* name : {"fig6.txt", "ring5_chord.txt"}) {
    Graph g = Load(name);
    const int budget = CrrBounds(g).second;
    Oracle oracle(g, budget, 1, 3, false);
    for (const auto& [start, win] : oracle.Solve()) CHECK(win);
  }
}

TEST_CASE("below the largest out-degree the engine attacker wins at once") {
  Graph g = Load("fig8.txt");
  const Rational x = Fraction(29, 10);
  auto s = MakeStrategist(g, x, 1);
  EngineDefender d(s);
  EngineAttacker a(s);
  GameTrace t = RunMatch(g, x, 1, 1, d, a);
  CHECK(t.outcome.kind == Outcome::Kind::kBreached);
  CHECK(t.outcome.time == 0);
}

}  // namespace
}  // namespace ddab
