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

// Defender and attacker strategies driven by the safe sets, plus the
// action-level plumbing they need: extracting a matrix that realizes a
// chosen next state, reversing an action, and merging subteam actions.

#ifndef DDAB_STRATEGY_H_
#define DDAB_STRATEGY_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddab/graph.h"
#include "ddab/polyhedron.h"
#include "ddab/qsets.h"
#include "ddab/rational.h"

namespace ddab {

// How long a move is certified to hold. For the defender, `k` more attacker
// moves are survived; for the attacker, a breach is forced within `k` more
// moves of its own.
struct Guarantee {
  enum class Kind {
    kNone,        // defender: already lost; attacker: no forced breach
    kFinite,      // exactly the number of steps in k
    kIndefinite,  // safe-set fixed point reached
  };
  Kind kind = Kind::kNone;
  int k = 0;
  // The safe sets did not converge and the horizon was truncated at the
  // deepest computed set: the true value is at least k.
  bool at_least = false;

  static Guarantee None() { return {}; }
  static Guarantee Finite(int k, bool at_least = false) {
    return {Kind::kFinite, k, at_least};
  }
  static Guarantee Indefinite(int k) { return {Kind::kIndefinite, k, false}; }

  // "none", "3", ">=3" or "indefinite".
  std::string ToString() const;
  friend bool operator==(const Guarantee&, const Guarantee&) = default;
};

struct StrategyOutcome {
  RationalVector next;                    // the player's next allocation
  std::optional<int> node;                // attacker: concentration node
  std::optional<TransitionMatrix> action; // the action realizing `next`
  Guarantee guarantee;
};

// The defender's allocation written as a weighted sum of per-attacker-node
// subteams. states[i] is in Y * Q_{horizon}^(i) and sums to X; weights[i]
// is the attacker fraction on node i, so sum_i weights[i] * states[i] is the
// physical allocation.
struct SubteamDecomposition {
  std::vector<std::optional<RationalVector>> states;
  RationalVector weights;
  int horizon_left = 0;

  RationalVector Combined() const;
};

// Columns with flow out of an emptied source are spread uniformly across
// its out-neighbors. Throws InfeasibleError when no edge flow maps y_from to
// y_to.
TransitionMatrix InferAttackerFlow(const Graph& g, const RationalVector& y_from,
                                   const RationalVector& y_to);

// A convex combination of extreme actions with K * x_from == x_to, from a
// vertex solution of the coefficient system. Throws InfeasibleError when
// x_to is not reachable.
TransitionMatrix ExtractAction(const ExtremeActionSet& actions, const RationalVector& x_from,
                               const RationalVector& x_to);

// A reversed-graph action taking k * x back to x.
TransitionMatrix ReverseAction(const Graph& g, const TransitionMatrix& k,
                               const RationalVector& x);

// An admissible K with K * sum(xi_l x_l) == sum(xi_l K_l x_l).
TransitionMatrix CombineSubteamActions(const Graph& g, const RationalVector& xi,
                                       const std::vector<RationalVector>& states,
                                       const std::vector<TransitionMatrix>& actions);

// The matrix that moves every column to its first out-neighbor, except the
// columns listed in `routes` (column -> destination).
TransitionMatrix RoutingAction(const Graph& g, const std::map<int, int>& routes,
                               ActionRole role);

// Strategy algorithms for one graph, defender total X and attacker total Y.
// `horizon` arguments count the attacker moves still to be survived after
// the move being chosen, minus one (the k of Q_k); nullopt means unbounded.
class Strategist {
 public:
  Strategist(std::shared_ptr<const QSetFamily> q, Rational x_total, Rational y_total,
             std::uint64_t extreme_action_cap = kDefaultExtremeActionCap);

  const QSetFamily& qsets() const { return *q_; }
  const Graph& graph() const { return q_->graph(); }
  const Rational& x_total() const { return x_total_; }
  const Rational& y_total() const { return y_total_; }
  const ExtremeActionSet& defender_actions() const { return actions_; }

  // Y * Q_k^(i), cached.
  const Polyhedron& ScaledQ(int node, int k) const;
  // Largest usable k for a requested horizon, and whether truncation made
  // it a lower bound.
  std::pair<int, bool> Ceiling(std::optional<int> horizon) const;

  // Alg. 2: initial allocation against an attacker concentrated on `node`.
  StrategyOutcome DefenderInitNsp(int node, std::optional<int> horizon) const;
  // Alg. 3: reaction to the attacker having moved onto `node`.
  StrategyOutcome DefenderFeedbackNsp(const RationalVector& x_prev, int node,
                                      std::optional<int> horizon) const;
  // Alg. 4: the attacker's starting node.
  StrategyOutcome AttackerInit(std::optional<int> horizon) const;
  // Alg. 5: the attacker's next node after seeing the defender's move.
  StrategyOutcome AttackerFeedback(const RationalVector& x, int node,
                                   std::optional<int> horizon) const;
  // Alg. 6: initial allocation against an arbitrary attacker allocation.
  std::pair<StrategyOutcome, SubteamDecomposition> DefenderInitGeneral(
      const RationalVector& y_init, std::optional<int> horizon) const;
  // Alg. 7: reaction to the attacker moving from y_prev2 to y_prev.
  std::pair<StrategyOutcome, SubteamDecomposition> DefenderFeedbackGeneral(
      const SubteamDecomposition& teams, const RationalVector& y_prev2,
      const RationalVector& y_prev, std::optional<int> horizon) const;

 private:
  Guarantee DefenderGuarantee(int k, int top, bool truncated) const;
  // Lexicographically smallest vertex of Delta_X intersected with Y Q_k^(i).
  std::optional<RationalVector> SimplexPoint(int node, int k) const;
  std::optional<RationalVector> ReachPointIn(const RationalVector& from, int node, int k) const;
  // Fallback when nothing is safe: the extreme image covering the most
  // attacker destinations from `node`.
  RationalVector BestEffort(const RationalVector& from, int node) const;

  std::shared_ptr<const QSetFamily> q_;
  Rational x_total_;
  Rational y_total_;
  ExtremeActionSet actions_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, Polyhedron> scaled_;
};

}  // namespace ddab

#endif  // DDAB_STRATEGY_H_
