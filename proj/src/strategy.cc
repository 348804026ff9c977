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

#include <algorithm>
#include <set>

#include "ddab/error.h"
#include "ddab/lp.h"

namespace ddab {
namespace {

void CheckSize(const RationalVector& v, int n, const char* what) {
  if (static_cast<int>(v.size()) != n) {
    throw ValidationError(std::string("dimension mismatch in ") + what);
  }
}

RationalVector Scale(const RationalVector& v, const Rational& s) {
  RationalVector r = v;
  for (auto& c : r) c *= s;
  return r;
}

void AddScaled(RationalVector& acc, const RationalVector& v, const Rational& s) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s * v[i];
}

// Lexicographically smallest vertex of a nonempty bounded set.
RationalVector FirstVertex(const Polyhedron& p) { return p.generators().vertices.front(); }

}  // namespace

std::string Guarantee::ToString() const {
  switch (kind) {
    case Kind::kNone:
      return "none";
    case Kind::kIndefinite:
      return "indefinite";
    case Kind::kFinite:
      return (at_least ? ">=" : "") + std::to_string(k);
  }
  return "none";
}

RationalVector SubteamDecomposition::Combined() const {
  RationalVector x;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i]) continue;
    if (x.empty()) x.assign(states[i]->size(), 0);
    AddScaled(x, *states[i], weights[i]);
  }
  return x;
}

TransitionMatrix RoutingAction(const Graph& g, const std::map<int, int>& routes,
                               ActionRole role) {
  const int n = g.node_count();
  TransitionMatrix k(n, role);
  for (int j = 0; j < n; ++j) {
    auto it = routes.find(j);
    int to = it != routes.end() ? it->second : g.OutNeighbors(j).front();
    if (!g.HasEdge(j, to)) {
      throw ValidationError("adjacency: no edge " + std::to_string(j + 1) + " -> " +
                            std::to_string(to + 1));
    }
    k.at(to, j) = 1;
  }
  return k;
}

TransitionMatrix InferAttackerFlow(const Graph& g, const RationalVector& y_from,
                                   const RationalVector& y_to) {
  const int n = g.node_count();
  CheckSize(y_from, n, "flow inference");
  CheckSize(y_to, n, "flow inference");
  if (Sum(y_from) != Sum(y_to)) {
    throw InfeasibleError("attacker totals differ between consecutive observations");
  }
  // Greedy transportation: sources in node order ship to destinations in
  // node order.
  std::vector<std::vector<Rational>> flow(n, std::vector<Rational>(n, 0));  // [from][to]
  RationalVector demand = y_to;
  bool ok = true;
  for (int i = 0; i < n && ok; ++i) {
    Rational supply = y_from[i];
    for (int j : g.OutNeighbors(i)) {
      if (supply == 0) break;
      Rational ship = std::min(supply, demand[j]);
      if (ship == 0) continue;
      flow[i][j] = ship;
      supply -= ship;
      demand[j] -= ship;
    }
    ok = supply == 0;
  }
  if (!ok) {
    // Exact feasibility program over edge flows.
    const auto& edges = g.edges();
    LinearProgram lp;
    for (int i = 0; i < n; ++i) {
      RationalVector row(edges.size(), 0);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].from == i) row[e] = 1;
      }
      lp.a.push_back(row);
      lp.b.push_back(y_from[i]);
    }
    for (int j = 0; j < n; ++j) {
      RationalVector row(edges.size(), 0);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].to == j) row[e] = 1;
      }
      lp.a.push_back(row);
      lp.b.push_back(y_to[j]);
    }
    LpResult r = SolveLinearProgram(lp);
    if (r.status != LpStatus::kOptimal) {
      throw InfeasibleError("reachability: the observed attacker move cannot be realized by "
                            "any admissible flow");
    }
    for (auto& row : flow) std::fill(row.begin(), row.end(), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) flow[edges[e].from][edges[e].to] = r.x[e];
  }
  TransitionMatrix f(n, ActionRole::kAttacker);
  for (int i = 0; i < n; ++i) {
    const auto& out = g.OutNeighbors(i);
    if (y_from[i] == 0) {
      for (int j : out) f.at(j, i) = Fraction(1, static_cast<long>(out.size()));
    } else {
      for (int j : out) f.at(j, i) = flow[i][j] / y_from[i];
    }
  }
  return f;
}

TransitionMatrix ExtractAction(const ExtremeActionSet& actions, const RationalVector& x_from,
                               const RationalVector& x_to) {
  const int n = actions.node_count();
  CheckSize(x_from, n, "action extraction");
  CheckSize(x_to, n, "action extraction");
  if (Sum(x_from) != Sum(x_to)) {
    throw InfeasibleError("reachability: target total differs from the current total");
  }
  // Only columns with mass matter; distinct images keep the first choice.
  std::vector<int> support;
  for (int j = 0; j < n; ++j) {
    if (x_from[j] != 0) support.push_back(j);
  }
  std::map<RationalVector, std::vector<int>, decltype(&LexLess)> images(&LexLess);
  std::vector<int> choice(n);
  for (int j = 0; j < n; ++j) choice[j] = actions.Neighbors(j).front();
  std::function<void(std::size_t, RationalVector&)> rec = [&](std::size_t s,
                                                              RationalVector& acc) {
    if (s == support.size()) {
      images.emplace(acc, choice);
      return;
    }
    const int col = support[s];
    for (int to : actions.Neighbors(col)) {
      choice[col] = to;
      acc[to] += x_from[col];
      rec(s + 1, acc);
      acc[to] -= x_from[col];
    }
    choice[col] = actions.Neighbors(col).front();
  };
  RationalVector acc(n, 0);
  rec(0, acc);

  std::vector<const std::vector<int>*> cols;
  LinearProgram lp;
  lp.a.assign(n + 1, RationalVector(images.size(), 0));
  std::size_t c = 0;
  for (const auto& [img, ch] : images) {
    for (int i = 0; i < n; ++i) lp.a[i][c] = img[i];
    lp.a[n][c] = 1;
    cols.push_back(&ch);
    ++c;
  }
  lp.b = x_to;
  lp.b.push_back(1);
  LpResult r = SolveLinearProgram(lp);
  if (r.status != LpStatus::kOptimal) {
    throw InfeasibleError("reachability: target state is not reachable in one step");
  }
  TransitionMatrix k(n, actions.role());
  for (std::size_t l = 0; l < cols.size(); ++l) {
    if (r.x[l] == 0) continue;
    for (int j = 0; j < n; ++j) k.at((*cols[l])[j], j) += r.x[l];
  }
  return k;
}

TransitionMatrix ReverseAction(const Graph& g, const TransitionMatrix& k,
                               const RationalVector& x) {
  if (auto why = k.ViolatedConstraint(g)) throw ValidationError(*why);
  const int n = g.node_count();
  CheckSize(x, n, "reverse action");
  Graph rev = g.Reversed();
  RationalVector xp = k.Apply(x);
  TransitionMatrix kr(n, k.role());
  for (int j = 0; j < n; ++j) {
    if (xp[j] > 0) {
      for (int i = 0; i < n; ++i) kr.at(i, j) = k.at(j, i) * x[i] / xp[j];
    } else {
      const auto& out = rev.OutNeighbors(j);
      for (int i : out) kr.at(i, j) = Fraction(1, static_cast<long>(out.size()));
    }
  }
  return kr;
}

TransitionMatrix CombineSubteamActions(const Graph& g, const RationalVector& xi,
                                       const std::vector<RationalVector>& states,
                                       const std::vector<TransitionMatrix>& actions) {
  const int n = g.node_count();
  if (xi.size() != states.size() || xi.size() != actions.size() || xi.empty()) {
    throw ValidationError("dimension mismatch in subteam combination");
  }
  RationalVector x(n, 0);
  for (std::size_t l = 0; l < xi.size(); ++l) {
    CheckSize(states[l], n, "subteam combination");
    if (actions[l].size() != n) throw ValidationError("dimension mismatch in subteam combination");
    AddScaled(x, states[l], xi[l]);
  }
  TransitionMatrix k(n, actions.front().role());
  for (int q = 0; q < n; ++q) {
    if (x[q] > 0) {
      for (int p = 0; p < n; ++p) {
        Rational s = 0;
        for (std::size_t l = 0; l < xi.size(); ++l) {
          if (xi[l] != 0 && states[l][q] != 0) s += xi[l] * states[l][q] * actions[l].at(p, q);
        }
        k.at(p, q) = s / x[q];
      }
    } else {
      const auto& out = g.OutNeighbors(q);
      for (int p : out) k.at(p, q) = Fraction(1, static_cast<long>(out.size()));
    }
  }
  return k;
}

Strategist::Strategist(std::shared_ptr<const QSetFamily> q, Rational x_total,
                       Rational y_total, std::uint64_t extreme_action_cap)
    : q_(std::move(q)),
      x_total_(std::move(x_total)),
      y_total_(std::move(y_total)),
      actions_(q_->graph(), extreme_action_cap, ActionRole::kDefender) {
  if (x_total_ < 0) throw ValidationError("nonnegativity: defender total is negative");
  if (y_total_ <= 0) throw ValidationError("attacker total must be positive");
}

const Polyhedron& Strategist::ScaledQ(int node, int k) const {
  const int eff = q_->EffectiveHorizon(k);
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(node, eff);
  auto it = scaled_.find(key);
  if (it == scaled_.end()) {
    it = scaled_.emplace(key, q_->At(node, eff).Scaled(y_total_)).first;
  }
  return it->second;
}

std::pair<int, bool> Strategist::Ceiling(std::optional<int> horizon) const {
  int top = q_->k_infinity() ? *q_->k_infinity() : q_->computed_horizon();
  bool truncated = false;
  if (horizon) {
    if (*horizon < top) {
      top = std::max(*horizon, 0);
    } else if (!q_->k_infinity() && *horizon > top) {
      truncated = true;
    }
  } else if (!q_->k_infinity()) {
    truncated = true;
  }
  return {top, truncated};
}

Guarantee Strategist::DefenderGuarantee(int k, int top, bool truncated) const {
  if (k < 0) return Guarantee::None();
  if (q_->k_infinity() && k >= *q_->k_infinity()) return Guarantee::Indefinite(k);
  return Guarantee::Finite(k, truncated && k == top);
}

std::optional<RationalVector> Strategist::SimplexPoint(int node, int k) const {
  if (Beta(*q_, k, node) * y_total_ > x_total_) return std::nullopt;
  Polyhedron s = ScaledQ(node, k).Intersect(Polyhedron::Simplex(graph().node_count(), x_total_));
  return FirstVertex(s);
}

std::optional<RationalVector> Strategist::ReachPointIn(const RationalVector& from, int node,
                                                       int k) const {
  Polyhedron r = ReachPoint(actions_, from).Intersect(ScaledQ(node, k));
  if (r.IsEmpty()) return std::nullopt;
  return FirstVertex(r);
}

RationalVector Strategist::BestEffort(const RationalVector& from, int node) const {
  const auto& targets = graph().OutNeighbors(node);
  RationalVector best;
  int best_cover = -1;
  for (const auto& img : actions_.DistinctImages(from)) {
    int cover = 0;
    for (int j : targets) cover += img[j] >= y_total_ ? 1 : 0;
    if (cover > best_cover) {
      best_cover = cover;
      best = img;
    }
  }
  return best;
}

StrategyOutcome Strategist::DefenderInitNsp(int node, std::optional<int> horizon) const {
  const int n = graph().node_count();
  auto [top, truncated] = Ceiling(horizon);
  for (int k = top; k >= 0; --k) {
    if (auto x = SimplexPoint(node, k)) {
      return {*x, std::nullopt, std::nullopt, DefenderGuarantee(k, top, truncated)};
    }
  }
  // Lost at t = 0 whatever happens; spread over the attacker's targets.
  RationalVector x(n, 0);
  const auto& out = graph().OutNeighbors(node);
  for (int j : out) x[j] = x_total_ / static_cast<long>(out.size());
  return {x, std::nullopt, std::nullopt, Guarantee::None()};
}

StrategyOutcome Strategist::DefenderFeedbackNsp(const RationalVector& x_prev, int node,
                                                std::optional<int> horizon) const {
  CheckSize(x_prev, graph().node_count(), "defender feedback");
  auto [top, truncated] = Ceiling(horizon);
  for (int k = top; k >= 0; --k) {
    if (auto x = ReachPointIn(x_prev, node, k)) {
      TransitionMatrix action = ExtractAction(actions_, x_prev, *x);
      return {*x, std::nullopt, action, DefenderGuarantee(k, top, truncated)};
    }
  }
  RationalVector x = BestEffort(x_prev, node);
  return {x, std::nullopt, ExtractAction(actions_, x_prev, x), Guarantee::None()};
}

StrategyOutcome Strategist::AttackerInit(std::optional<int> horizon) const {
  const int n = graph().node_count();
  auto [top, truncated] = Ceiling(horizon);
  for (int k = 0; k <= top; ++k) {
    int pick = -1;
    Rational pick_beta;
    for (int i = 0; i < n; ++i) {
      Rational b = Beta(*q_, k, i);
      if (b * y_total_ > x_total_ && (pick < 0 || b > pick_beta)) {
        pick = i;
        pick_beta = b;
      }
    }
    if (pick >= 0) {
      RationalVector y(n, 0);
      y[pick] = y_total_;
      return {y, pick, std::nullopt, Guarantee::Finite(k)};
    }
  }
  // No forced breach: start where the most defender resource is needed.
  int pick = 0;
  for (int i = 1; i < n; ++i) {
    if (Beta(*q_, top, i) > Beta(*q_, top, pick)) pick = i;
  }
  RationalVector y(n, 0);
  y[pick] = y_total_;
  Guarantee g = Guarantee::None();
  (void)truncated;
  return {y, pick, std::nullopt, g};
}

StrategyOutcome Strategist::AttackerFeedback(const RationalVector& x, int node,
                                             std::optional<int> horizon) const {
  const int n = graph().node_count();
  CheckSize(x, n, "attacker feedback");
  auto [top, truncated] = Ceiling(horizon);
  (void)truncated;
  const auto& out = graph().OutNeighbors(node);
  auto finish = [&](int to, Guarantee g) {
    RationalVector y(n, 0);
    y[to] = y_total_;
    return StrategyOutcome{y, to, RoutingAction(graph(), {{node, to}}, ActionRole::kAttacker),
                           g};
  };
  for (int j : out) {
    if (x[j] < y_total_) return finish(j, Guarantee::Finite(0));
  }
  for (int k = 1; k <= top; ++k) {
    if (ScaledQ(node, k).Contains(x)) continue;
    Polyhedron reach = ReachPoint(actions_, x);
    for (int j : out) {
      if (reach.Intersect(ScaledQ(j, k - 1)).IsEmpty()) return finish(j, Guarantee::Finite(k));
    }
    // Membership failed only through a neighbor test, so some j must
    // qualify; reaching here means the family is inconsistent.
    throw Error(ErrorKind::kVerification, "safe-set family inconsistent at node " +
                                              std::to_string(node + 1));
  }
  return finish(out.front(), Guarantee::None());
}

std::pair<StrategyOutcome, SubteamDecomposition> Strategist::DefenderInitGeneral(
    const RationalVector& y_init, std::optional<int> horizon) const {
  const int n = graph().node_count();
  CheckSize(y_init, n, "defender initialization");
  if (Sum(y_init) != y_total_) throw ValidationError("column-sum: attacker total mismatch");
  auto [top, truncated] = Ceiling(horizon);
  SubteamDecomposition teams;
  teams.states.assign(n, std::nullopt);
  teams.weights = Scale(y_init, 1 / y_total_);
  for (int k = top; k >= 0; --k) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (y_init[i] == 0) continue;
      auto x = SimplexPoint(i, k);
      if (!x) {
        ok = false;
      } else {
        teams.states[i] = *x;
      }
    }
    if (ok) {
      teams.horizon_left = k;
      return {{teams.Combined(), std::nullopt, std::nullopt, DefenderGuarantee(k, top, truncated)},
              teams};
    }
    std::fill(teams.states.begin(), teams.states.end(), std::nullopt);
  }
  for (int i = 0; i < n; ++i) {
    if (y_init[i] != 0) teams.states[i] = DefenderInitNsp(i, 0).next;
  }
  teams.horizon_left = -1;
  return {{teams.Combined(), std::nullopt, std::nullopt, Guarantee::None()}, teams};
}

std::pair<StrategyOutcome, SubteamDecomposition> Strategist::DefenderFeedbackGeneral(
    const SubteamDecomposition& teams, const RationalVector& y_prev2,
    const RationalVector& y_prev, std::optional<int> horizon) const {
  const Graph& g = graph();
  const int n = g.node_count();
  CheckSize(y_prev2, n, "defender feedback");
  CheckSize(y_prev, n, "defender feedback");
  TransitionMatrix f = InferAttackerFlow(g, y_prev2, y_prev);
  struct Pair {
    int from, to;
    Rational xi;  // [y_prev2]_from [f_from]_to / Y
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < n; ++i) {
    if (y_prev2[i] == 0) continue;
    if (!teams.states[i]) throw ValidationError("subteam missing for an occupied node");
    for (int j = 0; j < n; ++j) {
      if (f.at(j, i) != 0) pairs.push_back({i, j, y_prev2[i] * f.at(j, i) / y_total_});
    }
  }
  auto [top, truncated] = Ceiling(horizon);
  std::vector<RationalVector> targets(pairs.size());
  int chosen = -1;
  for (int k = top; k >= 0 && chosen < 0; --k) {
    bool ok = true;
    for (std::size_t p = 0; p < pairs.size() && ok; ++p) {
      auto x = ReachPointIn(*teams.states[pairs[p].from], pairs[p].to, k);
      if (!x) {
        ok = false;
      } else {
        targets[p] = *x;
      }
    }
    if (ok) chosen = k;
  }
  if (chosen < 0) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      targets[p] = BestEffort(*teams.states[pairs[p].from], pairs[p].to);
    }
  }
  SubteamDecomposition next;
  next.states.assign(n, std::nullopt);
  next.weights = Scale(y_prev, 1 / y_total_);
  next.horizon_left = chosen;
  RationalVector xi;
  std::vector<RationalVector> states;
  std::vector<TransitionMatrix> sub_actions;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const int j = pairs[p].to;
    // Weight of sub-subteam (i -> j) inside the new subteam j.
    Rational share = pairs[p].xi * y_total_ / y_prev[j];
    if (!next.states[j]) next.states[j] = RationalVector(n, 0);
    AddScaled(*next.states[j], targets[p], share);
    xi.push_back(pairs[p].xi);
    states.push_back(*teams.states[pairs[p].from]);
    sub_actions.push_back(ExtractAction(actions_, states.back(), targets[p]));
  }
  TransitionMatrix overall = CombineSubteamActions(g, xi, states, sub_actions);
  RationalVector x_next = next.Combined();
  Guarantee guarantee =
      chosen < 0 ? Guarantee::None() : DefenderGuarantee(chosen, top, truncated);
  return {{x_next, std::nullopt, overall, guarantee}, next};
}

}  // namespace ddab
