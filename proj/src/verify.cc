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

#include "ddab/verify.h"

#include <algorithm>
#include <memory>
#include <numeric>

#include "ddab/error.h"
#include "ddab/qsets.h"

namespace ddab {

namespace {

std::string Describe(const Graph& g) {
  std::string s = "N=" + std::to_string(g.node_count()) + " edges";
  for (const auto& e : g.edges()) {
    s += " " + std::to_string(e.from + 1) + ">" + std::to_string(e.to + 1);
  }
  return s;
}

std::shared_ptr<const Strategist> MakeStrategist(
    const std::shared_ptr<const QSetFamily>& q, const Rational& x,
    std::uint64_t cap = kDefaultExtremeActionCap) {
  return std::make_shared<const Strategist>(q, x, 1, cap);
}

}  // namespace

std::vector<Graph> EnumerateStronglyConnected(int n) {
  std::vector<Edge> slots;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) slots.push_back({j, i});
  }
  std::vector<Graph> out;
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < slots.size(); ++b) {
      if (mask >> b & 1) edges.push_back(slots[b]);
    }
    if (StrongConnectivityWitness(n, edges)) continue;
    out.push_back(Graph::FromEdges(n, edges));
  }
  return out;
}

Graph RandomStronglyConnected(std::mt19937_64& rng, int n, double extra_edge_probability) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a) edges.push_back({order[a], order[(a + 1) % n]});
  std::bernoulli_distribution extra(extra_edge_probability);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (extra(rng)) edges.push_back({j, i});
    }
  }
  return Graph::FromEdges(n, edges);
}

TransitionMatrix RandomAdmissibleAction(std::mt19937_64& rng, const Graph& g, ActionRole role) {
  const int n = g.node_count();
  TransitionMatrix k(n, role);
  std::uniform_int_distribution<int> weight(0, 3);
  for (int j = 0; j < n; ++j) {
    const auto& out = g.OutNeighbors(j);
    std::vector<int> w(out.size());
    int total = 0;
    for (auto& v : w) total += (v = weight(rng));
    if (total == 0) {
      w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)] = 1;
      total = 1;
    }
    for (std::size_t a = 0; a < out.size(); ++a) k.at(out[a], j) = Fraction(w[a], total);
  }
  return k;
}

OracleSweepResult OracleSweep(const std::vector<Graph>& graphs, const OracleSweepOptions& options) {
  OracleSweepResult r;
  for (const Graph& g : graphs) {
    const int n = g.node_count();
    QPropOptions qopts;
    qopts.horizon = options.max_t;
    qopts.extreme_action_cap = options.extreme_action_cap;
    auto q = std::make_shared<const QSetFamily>(QProp(g, qopts));
    for (int t = 0; t <= options.max_t; ++t) {
      bool previous_win = false;
      for (int x = 0; x <= options.max_x; ++x) {
        const std::string where = Describe(g) + " X=" + std::to_string(x) + " T=" +
                                  std::to_string(t);
        Oracle full(g, x, 1, t, false, options.oracle_state_cap);
        Oracle concentrated(g, x, 1, t, true, options.oracle_state_cap);
        const bool oracle_win = full.DefenderWins();
        const bool concentrated_win = concentrated.DefenderWins();
        ++r.no_split.instances;
        if (oracle_win != concentrated_win) r.no_split.Fail(where);
        ++r.monotone.instances;
        if (previous_win && !oracle_win) r.monotone.Fail(where);
        previous_win = oracle_win;

        auto s = MakeStrategist(q, x, options.extreme_action_cap);
        EngineDefender d(s);
        EngineAttacker a(s);
        GameTrace trace = RunMatch(g, x, 1, t, d, a);
        const bool engine_win = trace.outcome.winner == Player::kDefender;
        ++r.engine_vs_oracle.instances;
        if (engine_win != oracle_win || trace.outcome.kind == Outcome::Kind::kForfeit) {
          r.engine_vs_oracle.Fail(where + ": engine " + trace.outcome.Summary() + ", oracle " +
                                  (oracle_win ? "defender" : "attacker"));
        }
      }
    }
    for (int y_total : options.extra_split_totals) {
      for (int t = 0; t <= options.max_t; ++t) {
        for (int x = 0; x <= options.max_x; ++x) {
          Oracle full(g, x, y_total, t, false, options.oracle_state_cap);
          Oracle concentrated(g, x, y_total, t, true, options.oracle_state_cap);
          ++r.no_split.instances;
          if (full.DefenderWins() != concentrated.DefenderWins()) {
            r.no_split.Fail(Describe(g) + " X=" + std::to_string(x) + " Y=" +
                            std::to_string(y_total) + " T=" + std::to_string(t));
          }
        }
      }
    }
    // Membership of every integer allocation, per node and horizon.
    for (int x = 0; x <= options.max_x; ++x) {
      Oracle oracle(g, x, 1, options.max_t, false, options.oracle_state_cap);
      for (const auto& alloc : Oracle::Compositions(n, x)) {
        RationalVector xr(alloc.begin(), alloc.end());
        for (int i = 0; i < n; ++i) {
          std::vector<int> y(n, 0);
          y[i] = 1;
          for (int k = 0; k <= options.max_t; ++k) {
            ++r.membership.instances;
            if (q->At(i, k).Contains(xr) != oracle.Defends(alloc, y, k + 1)) {
              r.membership.Fail(Describe(g) + " x=" + ToString(xr) + " node " +
                                std::to_string(i + 1) + " k=" + std::to_string(k));
            }
          }
        }
      }
    }
  }
  for (CheckResult* c : {&r.engine_vs_oracle, &r.membership, &r.no_split, &r.monotone}) {
    if (c->pass) c->detail = std::to_string(c->instances) + " instances";
  }
  return r;
}

CheckResult DegenerateRegime(int graph_count, int max_nodes, std::uint64_t seed) {
  CheckResult r{"degenerate regime below d_max"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, max_nodes);
  for (int c = 0; c < graph_count; ++c) {
    Graph g = RandomStronglyConnected(rng, size(rng));
    QPropOptions qopts;
    qopts.horizon = 1;
    auto q = std::make_shared<const QSetFamily>(QProp(g, qopts));
    const Rational d_max = MaxOutDegree(g);
    {
      const Rational x = d_max - Fraction(1, 100);
      auto s = MakeStrategist(q, x);
      EngineDefender d(s);
      EngineAttacker a(s);
      GameTrace t = RunMatch(g, x, 1, 1, d, a);
      ++r.instances;
      if (t.outcome.kind != Outcome::Kind::kBreached || t.outcome.time != 0) {
        r.Fail(Describe(g) + " X=d_max-1/100: " + t.outcome.Summary());
      }
    }
    {
      auto s = MakeStrategist(q, d_max);
      EngineDefender d(s);
      EngineAttacker a(s);
      GameTrace t = RunMatch(g, d_max, 1, 1, d, a);
      ++r.instances;
      if (t.outcome.kind == Outcome::Kind::kBreached && t.outcome.time == 0) {
        r.Fail(Describe(g) + " X=d_max: " + t.outcome.Summary());
      }
    }
  }
  if (r.pass) r.detail = std::to_string(graph_count) + " graphs";
  return r;
}

CheckResult QSetInvariants(const std::vector<Graph>& graphs) {
  CheckResult r{"safe-set monotonicity, fixed point and ratio bracketing"};
  for (const Graph& g : graphs) {
    const int n = g.node_count();
    QSetFamily q = QProp(g);
    const std::string where = Describe(g);
    for (int k = 1; k <= q.computed_horizon(); ++k) {
      for (int i = 0; i < n; ++i) {
        ++r.instances;
        if (!q.At(i, k - 1).Includes(q.At(i, k))) {
          r.Fail(where + ": Q_" + std::to_string(k) + " not inside Q_" + std::to_string(k - 1));
        }
      }
    }
    CrrReport report = Crr(q);
    for (std::size_t k = 0; k < report.alpha.size(); ++k) {
      ++r.instances;
      if (k > 0 && report.alpha[k] < report.alpha[k - 1]) r.Fail(where + ": alpha decreased");
      if (report.alpha[k] < report.lower_bound || report.alpha[k] > report.upper_bound) {
        r.Fail(where + ": alpha_" + std::to_string(k) + " = " + ToString(report.alpha[k]) +
               " outside bounds");
      }
    }
    if (q.k_infinity()) {
      std::vector<Polyhedron> fixed;
      for (int i = 0; i < n; ++i) fixed.push_back(q.At(i, *q.k_infinity()));
      ExtremeActionSet reversed(g.Reversed());
      auto again = QSetUpdate(g, reversed, fixed);
      for (int i = 0; i < n; ++i) {
        ++r.instances;
        if (!again[i].Equals(fixed[i])) r.Fail(where + ": fixed point moved at node " +
                                               std::to_string(i + 1));
      }
    }
  }
  if (r.pass) r.detail = std::to_string(r.instances) + " checks on " +
                         std::to_string(graphs.size()) + " graphs";
  return r;
}

CheckResult ReverseActionRoundTrip(int cases, std::uint64_t seed) {
  CheckResult r{"reverse action round trip"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, 5), amount(0, 6), den(1, 3);
  for (int c = 0; c < cases; ++c) {
    Graph g = RandomStronglyConnected(rng, size(rng));
    TransitionMatrix k = RandomAdmissibleAction(rng, g);
    RationalVector x(g.node_count());
    for (auto& v : x) v = Fraction(amount(rng), den(rng));
    TransitionMatrix kr = ReverseAction(g, k, x);
    ++r.instances;
    if (!kr.IsAdmissible(g.Reversed()) || kr.Apply(k.Apply(x)) != x) {
      r.Fail(Describe(g) + " x=" + ToString(x));
    }
  }
  if (r.pass) r.detail = std::to_string(cases) + " random cases";
  return r;
}

CheckResult OverallActionIdentity(int cases, std::uint64_t seed) {
  CheckResult r{"overall action identity and admissibility"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, 5), teams(1, 4), amount(0, 4), weight(1, 4);
  for (int c = 0; c < cases; ++c) {
    Graph g = RandomStronglyConnected(rng, size(rng));
    const int n = g.node_count();
    const int m = teams(rng);
    RationalVector xi;
    std::vector<RationalVector> states;
    std::vector<TransitionMatrix> actions;
    for (int l = 0; l < m; ++l) {
      xi.push_back(Fraction(weight(rng), 4));
      RationalVector s(n);
      for (auto& v : s) v = Fraction(amount(rng), 2);
      states.push_back(s);
      actions.push_back(RandomAdmissibleAction(rng, g));
    }
    TransitionMatrix k = CombineSubteamActions(g, xi, states, actions);
    RationalVector x(n, 0), expected(n, 0);
    for (int l = 0; l < m; ++l) {
      RationalVector moved = actions[l].Apply(states[l]);
      for (int i = 0; i < n; ++i) {
        x[i] += xi[l] * states[l][i];
        expected[i] += xi[l] * moved[i];
      }
    }
    ++r.instances;
    if (!k.IsAdmissible(g) || k.Apply(x) != expected) r.Fail(Describe(g));
  }
  if (r.pass) r.detail = std::to_string(cases) + " random cases";
  return r;
}

CheckResult Superposition(const std::vector<Graph>& graphs, int runs, int steps,
                          std::uint64_t seed) {
  CheckResult r{"subteam superposition under splitting attackers"};
  std::mt19937_64 rng(seed);
  for (const Graph& g : graphs) {
    auto q = std::make_shared<const QSetFamily>(QProp(g));
    if (!q->k_infinity()) continue;
    const int n = g.node_count();
    const int k_inf = *q->k_infinity();
    const Rational x_total = *Crr(*q).alpha_infinity;
    Strategist s(q, x_total, 1);
    auto check_teams = [&](const SubteamDecomposition& teams, const RationalVector& x,
                           const RationalVector& y, const std::string& where) {
      ++r.instances;
      if (teams.Combined() != x) r.Fail(where + ": allocation is not the weighted sum");
      for (int j = 0; j < n; ++j) {
        if (teams.weights[j] != y[j]) r.Fail(where + ": weight mismatch at node " +
                                             std::to_string(j + 1));
        if (y[j] == 0) continue;
        if (!teams.states[j]) {
          r.Fail(where + ": missing subteam for node " + std::to_string(j + 1));
        } else if (Sum(*teams.states[j]) != x_total ||
                   !s.ScaledQ(j, k_inf).Contains(*teams.states[j])) {
          r.Fail(where + ": subteam " + std::to_string(j + 1) + " left its safe set");
        }
      }
    };
    std::uniform_int_distribution<int> amount(0, 3);
    for (int run = 0; run < runs; ++run) {
      RationalVector y(n);
      for (auto& v : y) v = amount(rng);
      y[std::uniform_int_distribution<int>(0, n - 1)(rng)] += 1;
      const Rational total = Sum(y);
      for (auto& v : y) v /= total;
      const std::string where = Describe(g) + " run " + std::to_string(run);
      auto [init, teams] = s.DefenderInitGeneral(y, std::nullopt);
      RationalVector x = init.next;
      check_teams(teams, x, y, where + " t=0");
      for (int t = 0; t < steps && r.pass; ++t) {
        RationalVector y_next = RandomAdmissibleAction(rng, g, ActionRole::kAttacker).Apply(y);
        if (CheckBreach(x, y_next)) r.Fail(where + ": breach at t=" + std::to_string(t));
        auto [fb, next_teams] = s.DefenderFeedbackGeneral(teams, y, y_next, std::nullopt);
        if (!fb.action || !fb.action->IsAdmissible(g) || fb.action->Apply(x) != fb.next) {
          r.Fail(where + ": inadmissible defender action at t=" + std::to_string(t + 1));
        }
        x = fb.next;
        teams = next_teams;
        y = y_next;
        check_teams(teams, x, y, where + " t=" + std::to_string(t + 1));
      }
    }
  }
  if (r.pass) r.detail = std::to_string(r.instances) + " steps checked";
  return r;
}

}  // namespace ddab
