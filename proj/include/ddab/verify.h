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

#ifndef DDAB_VERIFY_H_
#define DDAB_VERIFY_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ddab/game.h"
#include "ddab/graph.h"
#include "ddab/strategy.h"

namespace ddab {

// Outcome of one cross-check over a family of instances.
struct CheckResult {
  std::string name;
  bool pass = true;
  long instances = 0;
  std::string detail;  // first failure, or a short summary

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// Every strongly connected labeled graph on n nodes (self-loops optional).
std::vector<Graph> EnumerateStronglyConnected(int n);
// A directed cycle over a random permutation plus random extra edges.
Graph RandomStronglyConnected(std::mt19937_64& rng, int n, double extra_edge_probability = 0.3);
// A random admissible action with small-denominator weights.
TransitionMatrix RandomAdmissibleAction(std::mt19937_64& rng, const Graph& g,
                                        ActionRole role = ActionRole::kDefender);

struct OracleSweepOptions {
  int max_x = 4;
  int max_t = 4;
  std::uint64_t oracle_state_cap = kDefaultOracleStateCap;
  std::uint64_t extreme_action_cap = kDefaultExtremeActionCap;
  // Additional attacker totals for the splitting comparison; at Y = 1 an
  // integer attacker cannot split, so Y = 2 is where the check has teeth.
  std::vector<int> extra_split_totals = {2};
};

struct OracleSweepResult {
  CheckResult engine_vs_oracle{"engine winner equals oracle winner"};
  CheckResult membership{"integer safe-set membership equals oracle defendability"};
  CheckResult no_split{"splitting attacker wins exactly when a concentrated one does"};
  CheckResult monotone{"oracle outcome monotone in X"};
};

// Y = 1, integer X in [0, max_x], T in [0, max_t], over every graph.
OracleSweepResult OracleSweep(const std::vector<Graph>& graphs, const OracleSweepOptions& options);

// X just below d_max * Y loses at t = 0 to the engine attacker; X = d_max * Y
// is not breached at t = 0 by the engine attacker.
CheckResult DegenerateRegime(int graph_count, int max_nodes, std::uint64_t seed);

// Nested safe sets, fixed-point re-application, alpha monotone and
// bracketed by (d_max, sum of shortest loop lengths).
CheckResult QSetInvariants(const std::vector<Graph>& graphs);
CheckResult ReverseActionRoundTrip(int cases, std::uint64_t seed);
CheckResult OverallActionIdentity(int cases, std::uint64_t seed);
// Random splitting attackers against the subteam defender at X = alpha_inf:
// the defender allocation is the weighted sum of subteam states, each state
// stays in its scaled fixed-point set, and no breach occurs.
CheckResult Superposition(const std::vector<Graph>& graphs, int runs, int steps,
                          std::uint64_t seed);

}  // namespace ddab

#endif  // DDAB_VERIFY_H_
