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

#include "ddab/strategy.h"

#include <random>

#include "ddab/error.h"
#include "ddab/game.h"
#include "doctest.h"

namespace ddab {
namespace {

Graph Load(const std::string& name) {
  return LoadGraphFile(std::string(DDAB_DATA_DIR) + "/graphs/" + name);
}

Graph RandomGraph(std::mt19937& rng, int n, int extra) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  std::uniform_int_distribution<int> node(0, n - 1);
  for (int e = 0; e < extra; ++e) edges.push_back({node(rng), node(rng)});
  return Graph::FromEdges(n, edges);
}

RationalVector RandomVector(std::mt19937& rng, int n, int max_num, int den) {
  RationalVector v(n);
  std::uniform_int_distribution<int> d(0, max_num);
  for (auto& x : v) x = Fraction(d(rng), den);
  return v;
}

// A random column-stochastic matrix supported on the edges of g.
TransitionMatrix RandomAction(std::mt19937& rng, const Graph& g,
                              ActionRole role = ActionRole::kDefender) {
  const int n = g.node_count();
  TransitionMatrix k(n, role);
  std::uniform_int_distribution<int> w(0, 3);
  for (int j = 0; j < n; ++j) {
    const auto& out = g.OutNeighbors(j);
    std::vector<int> weights;
    int total = 0;
    for (std::size_t a = 0; a < out.size(); ++a) {
      weights.push_back(w(rng));
      total += weights.back();
    }
    if (total == 0) {
      weights[0] = 1;
      total = 1;
    }
    for (std::size_t a = 0; a < out.size(); ++a) k.at(out[a], j) = Fraction(weights[a], total);
  }
  return k;
}

TEST_CASE("guarantee text") {
  CHECK(Guarantee::None().ToString() == "none");
  CHECK(Guarantee::Finite(3).ToString() == "3");
  CHECK(Guarantee::Finite(3, true).ToString() == ">=3");
  CHECK(Guarantee::Indefinite(4).ToString() == "indefinite");
}

TEST_CASE("reversed action undoes the forward action") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    Graph g = RandomGraph(rng, 2 + trial % 4, trial % 5);
    TransitionMatrix k = RandomAction(rng, g);
    RationalVector x = RandomVector(rng, g.node_count(), 6, 1 + trial % 3);
    TransitionMatrix kr = ReverseAction(g, k, x);
    CHECK(kr.IsAdmissible(g.Reversed()));
    CHECK(kr.Apply(k.Apply(x)) == x);
  }
}

TEST_CASE("combined subteam action reproduces the weighted sum") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = RandomGraph(rng, 2 + trial % 4, trial % 4);
    const int n = g.node_count();
    const int teams = 1 + trial % 3;
    RationalVector xi;
    std::vector<RationalVector> states;
    std::vector<TransitionMatrix> actions;
    for (int l = 0; l < teams; ++l) {
      xi.push_back(Fraction(1 + l, 2));
      states.push_back(RandomVector(rng, n, 4, 2));
      actions.push_back(RandomAction(rng, g));
    }
    TransitionMatrix k = CombineSubteamActions(g, xi, states, actions);
    CHECK(k.IsAdmissible(g));
    RationalVector x(n, 0), expected(n, 0);
    for (int l = 0; l < teams; ++l) {
      RationalVector moved = actions[l].Apply(states[l]);
      for (int i = 0; i < n; ++i) {
        x[i] += xi[l] * states[l][i];
        expected[i] += xi[l] * moved[i];
      }
    }
    CHECK(k.Apply(x) == expected);
  }
}

TEST_CASE("action extraction realizes any reachable target") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    Graph g = RandomGraph(rng, 2 + trial % 4, trial % 5);
    ExtremeActionSet actions(g);
    RationalVector x = RandomVector(rng, g.node_count(), 5, 2);
    RationalVector target = RandomAction(rng, g).Apply(x);
    TransitionMatrix k = ExtractAction(actions, x, target);
    CHECK(k.IsAdmissible(g));
    CHECK(k.Apply(x) == target);
  }
}

TEST_CASE("action extraction rejects unreachable targets") {
  Graph g = Load("ring5.txt");
  ExtremeActionSet actions(g);
  CHECK_THROWS_AS(ExtractAction(actions, {1, 0, 0, 0, 0}, {1, 0, 0, 0, 0}), InfeasibleError);
  CHECK_THROWS_AS(ExtractAction(actions, {1, 0, 0, 0, 0}, {0, 2, 0, 0, 0}), InfeasibleError);
}

TEST_CASE("attacker flow inference") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 150; ++trial) {
    Graph g = RandomGraph(rng, 2 + trial % 4, trial % 5);
    RationalVector y = RandomVector(rng, g.node_count(), 4, 3);
    RationalVector y_next = RandomAction(rng, g, ActionRole::kAttacker).Apply(y);
    TransitionMatrix f = InferAttackerFlow(g, y, y_next);
    CHECK(f.role() == ActionRole::kAttacker);
    CHECK(f.IsAdmissible(g));
    CHECK(f.Apply(y) == y_next);
  }
  Graph ring = Load("ring5.txt");
  CHECK_THROWS_AS(InferAttackerFlow(ring, {1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}), InfeasibleError);
  CHECK_THROWS_AS(InferAttackerFlow(ring, {1, 0, 0, 0, 0}, {0, 2, 0, 0, 0}), InfeasibleError);
}

std::shared_ptr<const QSetFamily> Family(const Graph& g) {
  return std::make_shared<const QSetFamily>(QProp(g));
}

TEST_CASE("concentrated defender at the critical ratio") {
  Graph g = Load("fig6.txt");
  Strategist s(Family(g), 3, 1);
  for (int node = 0; node < 3; ++node) {
    StrategyOutcome init = s.DefenderInitNsp(node, std::nullopt);
    CHECK(init.guarantee.kind == Guarantee::Kind::kIndefinite);
    CHECK(Sum(init.next) == 3);
    CHECK(s.ScaledQ(node, 4).Contains(init.next));
    // Whatever the attacker does, the defender stays inside the fixed point.
    for (int to : g.OutNeighbors(node)) {
      StrategyOutcome fb = s.DefenderFeedbackNsp(init.next, to, std::nullopt);
      CHECK(fb.guarantee.kind == Guarantee::Kind::kIndefinite);
      REQUIRE(fb.action.has_value());
      CHECK(fb.action->Apply(init.next) == fb.next);
      CHECK(s.ScaledQ(to, 4).Contains(fb.next));
    }
  }
  CHECK(s.AttackerInit(std::nullopt).guarantee.kind == Guarantee::Kind::kNone);
}

TEST_CASE("concentrated attacker below the critical ratio") {
  Graph g = Load("fig6.txt");
  auto q = Family(g);
  Strategist s(q, 2, 1);
  StrategyOutcome start = s.AttackerInit(std::nullopt);
  REQUIRE(start.guarantee.kind == Guarantee::Kind::kFinite);
  const int k = start.guarantee.k;
  REQUIRE(start.node.has_value());
  CHECK(Beta(*q, k, *start.node) > 2);
  for (int j = 0; j < 3; ++j) {
    if (k > 0) CHECK(Beta(*q, k - 1, j) <= 2);
  }
  // The integer solver agrees that two units lose within k steps from there.
  Oracle oracle(g, 2, 1, k, true);
  std::vector<int> y(3, 0);
  y[*start.node] = 1;
  CHECK_FALSE(oracle.Solve().at(y));
}

TEST_CASE("attacker feedback picks an uncovered neighbor first") {
  Graph g = Load("fig6.txt");
  Strategist s(Family(g), 3, 1);
  StrategyOutcome out = s.AttackerFeedback({3, 0, 0}, 1, std::nullopt);
  REQUIRE(out.node.has_value());
  CHECK(*out.node == 2);
  CHECK(out.guarantee == Guarantee::Finite(0));
  REQUIRE(out.action.has_value());
  CHECK(out.action->Apply({0, 1, 0}) == RationalVector{0, 0, 1});
}

TEST_CASE("general defender survives splitting attackers at the critical ratio") {
  std::mt19937 rng(9);
  for (const char* name : {"fig6.txt", "ring5_chord_loop3.txt", "complete3.txt"}) {
    CAPTURE(name);
    Graph g = Load(name);
    auto q = Family(g);
    const Rational x_total = *Crr(*q).alpha_infinity;
    for (int trial = 0; trial < 4; ++trial) {
      const int n = g.node_count();
      Strategist s(q, x_total, 1);
      RationalVector y = RandomVector(rng, n, 3, 1);
      y[0] += 1;
      const Rational total = Sum(y);
      for (auto& v : y) v /= total;
      auto [init, teams] = s.DefenderInitGeneral(y, std::nullopt);
      CHECK(init.guarantee.kind == Guarantee::Kind::kIndefinite);
      CHECK(Sum(init.next) == x_total);
      RationalVector x = init.next;
      RationalVector y_prev = y;
      for (int t = 0; t < 6; ++t) {
        RationalVector y_next = RandomAction(rng, g, ActionRole::kAttacker).Apply(y_prev);
        CHECK_FALSE(CheckBreach(x, y_next).has_value());
        auto [fb, next_teams] = s.DefenderFeedbackGeneral(teams, y_prev, y_next, std::nullopt);
        REQUIRE(fb.action.has_value());
        CHECK(fb.action->IsAdmissible(g));
        CHECK(fb.action->Apply(x) == fb.next);
        CHECK(fb.guarantee.kind == Guarantee::Kind::kIndefinite);
        CHECK(next_teams.Combined() == fb.next);
        x = fb.next;
        teams = next_teams;
        y_prev = y_next;
      }
    }
  }
}

std::shared_ptr<const QSetFamily> Truncated(const Graph& g, int horizon) {
  QPropOptions opts;
  opts.horizon = horizon;
  return std::make_shared<const QSetFamily>(QProp(g, opts));
}

TEST_CASE("six-node strategy examples") {
  Graph g = Load("fig8.txt");
  auto q = Truncated(g, 2);
  Strategist three(q, 3, 1);
  StrategyOutcome init = three.DefenderInitNsp(2, 2);
  CHECK(init.guarantee == Guarantee::Finite(1));
  CHECK(init.next == RationalVector{0, 1, 1, 0, 1, 0});
  StrategyOutcome start = three.AttackerInit(2);
  CHECK(start.node == std::optional<int>(2));
  CHECK(start.guarantee == Guarantee::Finite(2));
  // Every time-1 configuration covering nodes 5 and 6 loses to some hop
  // from node 2 one step later.
  ExtremeActionSet actions(g);
  for (const RationalVector& x : {RationalVector{0, 1, 0, 0, 1, 1}, RationalVector{0, 0, 1, 0, 1, 1},
                                  RationalVector{0, 0, 0, 0, 2, 1}}) {
    StrategyOutcome hop = three.AttackerFeedback(x, 1, 1);
    CHECK(hop.guarantee == Guarantee::Finite(1));
    REQUIRE(hop.node.has_value());
    CHECK(ReachPoint(actions, x).Intersect(three.ScaledQ(*hop.node, 0)).IsEmpty());
  }
  CHECK(*three.AttackerFeedback({0, 1, 0, 0, 1, 1}, 1, 1).node == 4);
  Strategist plenty(q, 4, 1);
  CHECK(plenty.AttackerInit(2).guarantee.kind == Guarantee::Kind::kNone);
  Strategist few(q, Fraction(5, 2), 1);
  StrategyOutcome t0 = few.AttackerInit(2);
  CHECK(t0.guarantee == Guarantee::Finite(0));
  CHECK(g.OutDegree(*t0.node) == MaxOutDegree(g));
}

TEST_CASE("patrol budget is indefinite from every node") {
  for (const char* name : {"fig6.txt", "ring5_chord.txt", "ring5_chord_loop3.txt"}) {
    Graph g = Load(name);
    Strategist s(Family(g), CrrBounds(g).second, 1);
    for (int i = 0; i < g.node_count(); ++i) {
      CHECK(s.DefenderInitNsp(i, std::nullopt).guarantee.kind == Guarantee::Kind::kIndefinite);
    }
  }
}

TEST_CASE("the displayed first defender action is one valid witness") {
  Graph g = Load("fig8.txt");
  ExtremeActionSet actions(g);
  const RationalVector x0 = {0, 1, 1, 0, 1, Fraction(1, 2)};
  const RationalVector x1 = {Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 0, 1, 1};
  TransitionMatrix k = ExtractAction(actions, x0, x1);
  CHECK(k.IsAdmissible(g));
  CHECK(k.Apply(x0) == x1);
  CHECK_THROWS_AS(ExtractAction(actions, x0, {0, 0, 0, 0, 0, 1}), InfeasibleError);
}

TEST_CASE("swap graph action extraction") {
  Graph g = Graph::FromEdges(2, {{0, 1}, {1, 0}});
  ExtremeActionSet actions(g);
  TransitionMatrix k = ExtractAction(actions, {1, 0}, {0, 1});
  CHECK(k == TransitionMatrix::FromRows({{0, 1}, {1, 0}}));
}

TEST_CASE("reverse of a permutation and of the identity") {
  Graph cycle = Graph::FromEdges(3, {{0, 1}, {1, 2}, {2, 0}});
  TransitionMatrix p = TransitionMatrix::FromRows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  TransitionMatrix inv = ReverseAction(cycle, p, {1, 2, 3});
  CHECK(inv == TransitionMatrix::FromRows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
  Graph loops = Load("complete3.txt");
  CHECK(ReverseAction(loops, TransitionMatrix::Identity(3), {1, 1, 2}) == TransitionMatrix::Identity(3));
}

TEST_CASE("single subteam combination and emptied nodes") {
  Graph g = Load("fig8.txt");
  std::mt19937 rng(10);
  TransitionMatrix k1 = RandomAction(rng, g);
  TransitionMatrix k = CombineSubteamActions(g, {1}, {{1, 2, 1, 1, 3, 1}}, {k1});
  CHECK(k == k1);
  TransitionMatrix e = CombineSubteamActions(g, {1}, {{1, 0, 0, 0, 0, 0}}, {k1});
  CHECK(e.at(4, 1) == Fraction(1, 2));
  CHECK(e.at(5, 1) == Fraction(1, 2));
}

TEST_CASE("concentrated flow inference is the hop") {
  Graph g = Load("fig8.txt");
  TransitionMatrix f = InferAttackerFlow(g, {0, 0, 1, 0, 0, 0}, {0, 1, 0, 0, 0, 0});
  CHECK(f.at(1, 2) == 1);
  Graph loops = Load("complete3.txt");
  RationalVector y = {Fraction(1, 3), Fraction(2, 3), 0};
  CHECK(InferAttackerFlow(loops, y, y).Apply(y) == y);
}

TEST_CASE("general defender on the ring variants covers any split at the critical ratio") {
  std::mt19937 rng(12);
  for (const char* name : {"ring5.txt", "ring5_chord.txt", "ring5_chord_loop3.txt", "ring5_chord_loop4.txt"}) {
    CAPTURE(name);
    Graph g = Load(name);
    auto q = Family(g);
    const Rational alpha = *Crr(*q).alpha_infinity;
    Strategist s(q, alpha, 1);
    for (int trial = 0; trial < 5; ++trial) {
      RationalVector y = RandomVector(rng, 5, 3, 1);
      y[trial] += 1;
      const Rational total = Sum(y);
      for (auto& v : y) v /= total;
      auto [init, teams] = s.DefenderInitGeneral(y, std::nullopt);
      CHECK(init.guarantee.kind == Guarantee::Kind::kIndefinite);
      CHECK(teams.Combined() == init.next);
    }
  }
}

}  // namespace
}  // namespace ddab
