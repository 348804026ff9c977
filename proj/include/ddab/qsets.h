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

// Required sets, safe-set (Q-set) propagation and the critical resource
// ratio derived from it.

#ifndef DDAB_QSETS_H_
#define DDAB_QSETS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddab/graph.h"
#include "ddab/polyhedron.h"
#include "ddab/rational.h"

namespace ddab {

// The smallest allocation that matches every attacker configuration one
// step away from y: the componentwise maximum over the vertices of the
// attacker's reachable set.
RationalVector RequiredVector(const Graph& g, const RationalVector& y,
                              std::uint64_t cap = kDefaultExtremeActionCap);
// {x >= RequiredVector(g, y)}.
Polyhedron RequiredSet(const Graph& g, const RationalVector& y,
                       std::uint64_t cap = kDefaultExtremeActionCap);

struct QPropOptions {
  // Largest horizon to compute; nullopt iterates until convergence or
  // max_iterations, whichever comes first.
  std::optional<int> horizon;
  int max_iterations = 64;
  std::uint64_t extreme_action_cap = kDefaultExtremeActionCap;
};

// Safe sets Q_k^(i) for a unit attacker: an allocation x in Q_k^(i)
// defends k more steps against one attacker unit sitting on node i.
class QSetFamily {
 public:
  QSetFamily(Graph g, std::vector<std::vector<Polyhedron>> sets,
             std::optional<int> k_infinity);

  const Graph& graph() const { return graph_; }
  int node_count() const { return graph_.node_count(); }
  // Largest k stored.
  int computed_horizon() const { return static_cast<int>(sets_.size()) - 1; }
  std::optional<int> k_infinity() const { return k_inf_; }
  // Attacker total the sets are normalized to.
  Rational attacker_total() const { return 1; }

  // Q_k^(i); horizons past convergence return the fixed point. Throws
  // ValidationError if k was not computed.
  const Polyhedron& At(int node, int k) const;
  bool Has(int k) const;
  // Largest k with a distinct set (the fixed point index once converged).
  int EffectiveHorizon(int k) const;

 private:
  Graph graph_;
  std::vector<std::vector<Polyhedron>> sets_;  // [k][node]
  std::optional<int> k_inf_;
};

// One application of the update: intersect the reversed-graph reach of
// every out-neighbor's set with the node's own required set.
std::vector<Polyhedron> QSetUpdate(const Graph& g, const ExtremeActionSet& reversed,
                                   const std::vector<Polyhedron>& previous);

QSetFamily QProp(const Graph& g, const QPropOptions& options = {});

Rational Beta(const QSetFamily& q, int k, int node);

struct CrrReport {
  std::vector<std::vector<Rational>> beta;  // [k][node]
  std::vector<Rational> alpha;              // [k]
  std::optional<Rational> alpha_infinity;
  std::optional<int> k_infinity;
  int lower_bound = 0;
  int upper_bound = 0;
};

CrrReport Crr(const QSetFamily& q);

// (max out-degree, sum over nodes of the shortest loop length).
std::pair<int, int> CrrBounds(const Graph& g);

// Writes one file per (node, k) plus manifest.json into `directory`.
void WriteQSetDump(const QSetFamily& q, const CrrReport& report,
                   const std::string& directory, const std::string& engine_version);

}  // namespace ddab

#endif  // DDAB_QSETS_H_
