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

#include "ddab/qsets.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "ddab/error.h"
#include "json.hpp"

namespace ddab {

RationalVector RequiredVector(const Graph& g, const RationalVector& y, std::uint64_t cap) {
  const int n = g.node_count();
  if (static_cast<int>(y.size()) != n) throw ValidationError("dimension mismatch");
  ExtremeActionSet actions(g, cap, ActionRole::kAttacker);
  RationalVector req(n, 0);
  for (const auto& w : actions.DistinctImages(y)) {
    for (int i = 0; i < n; ++i) {
      if (w[i] > req[i]) req[i] = w[i];
    }
  }
  return req;
}

Polyhedron RequiredSet(const Graph& g, const RationalVector& y, std::uint64_t cap) {
  return Polyhedron::ShiftedOrthant(RequiredVector(g, y, cap));
}

QSetFamily::QSetFamily(Graph g, std::vector<std::vector<Polyhedron>> sets,
                       std::optional<int> k_infinity)
    : graph_(std::move(g)), sets_(std::move(sets)), k_inf_(k_infinity) {}

bool QSetFamily::Has(int k) const {
  return k >= 0 && (k <= computed_horizon() || k_inf_.has_value());
}

int QSetFamily::EffectiveHorizon(int k) const {
  if (k_inf_ && k > *k_inf_) return *k_inf_;
  return k;
}

const Polyhedron& QSetFamily::At(int node, int k) const {
  if (!Has(k)) {
    throw ValidationError("horizon " + std::to_string(k) + " was not computed (largest is " +
                          std::to_string(computed_horizon()) + ")");
  }
  if (node < 0 || node >= node_count()) {
    throw ValidationError("node " + std::to_string(node + 1) + " out of range");
  }
  return sets_[std::min(EffectiveHorizon(k), computed_horizon())][node];
}

std::vector<Polyhedron> QSetUpdate(const Graph& g, const ExtremeActionSet& reversed,
                                   const std::vector<Polyhedron>& previous) {
  const int n = g.node_count();
  std::vector<Polyhedron> reach(n);
  for (int j = 0; j < n; ++j) reach[j] = ReachPoly(reversed, previous[j]);
  std::vector<Polyhedron> next;
  next.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Halfspace> ineqs;
    std::vector<Halfspace> eqs;
    auto absorb = [&](const Polyhedron& p) {
      ineqs.insert(ineqs.end(), p.inequalities().begin(), p.inequalities().end());
      eqs.insert(eqs.end(), p.equalities().begin(), p.equalities().end());
    };
    for (int j : g.OutNeighbors(i)) absorb(reach[j]);
    absorb(Polyhedron::ShiftedOrthant(RequiredVector(g, Allocation::Concentrated(n, i, 1).values())));
    next.push_back(Polyhedron::FromConstraints(ineqs, eqs, n));
  }
  return next;
}

QSetFamily QProp(const Graph& g, const QPropOptions& options) {
  const int n = g.node_count();
  ExtremeActionSet reversed(g.Reversed(), options.extreme_action_cap, ActionRole::kDefender);
  std::vector<std::vector<Polyhedron>> sets;
  std::vector<Polyhedron> q0;
  for (int i = 0; i < n; ++i) {
    q0.push_back(RequiredSet(g, Allocation::Concentrated(n, i, 1).values(),
                             options.extreme_action_cap));
  }
  sets.push_back(std::move(q0));
  const int limit = options.horizon.value_or(options.max_iterations);
  for (int k = 1; k <= limit; ++k) {
    std::vector<Polyhedron> next = QSetUpdate(g, reversed, sets.back());
    // Q_k is contained in Q_{k-1} by construction; equality needs only the
    // reverse inclusion.
    bool same = true;
    for (int i = 0; i < n && same; ++i) same = next[i].Includes(sets.back()[i]);
    sets.push_back(std::move(next));
    if (same) return QSetFamily(g, std::move(sets), k - 1);
  }
  return QSetFamily(g, std::move(sets), std::nullopt);
}

Rational Beta(const QSetFamily& q, int k, int node) {
  return q.At(node, k).MinimizeTotal().first;
}

std::pair<int, int> CrrBounds(const Graph& g) {
  int upper = 0;
  for (int l : ShortestLoopLengths(g)) upper += l;
  return {MaxOutDegree(g), upper};
}

CrrReport Crr(const QSetFamily& q) {
  CrrReport r;
  const int n = q.node_count();
  for (int k = 0; k <= q.computed_horizon(); ++k) {
    std::vector<Rational> row;
    Rational alpha = 0;
    for (int i = 0; i < n; ++i) {
      row.push_back(Beta(q, k, i));
      if (row.back() > alpha) alpha = row.back();
    }
    r.beta.push_back(std::move(row));
    r.alpha.push_back(alpha);
  }
  r.k_infinity = q.k_infinity();
  if (r.k_infinity) r.alpha_infinity = r.alpha[*r.k_infinity];
  std::tie(r.lower_bound, r.upper_bound) = CrrBounds(q.graph());
  return r;
}

namespace {

nlohmann::json RationalJson(const Rational& r) {
  return {{"exact", ToString(r)}, {"decimal", ToDecimal(r)}};
}

}  // namespace

void WriteQSetDump(const QSetFamily& q, const CrrReport& report,
                   const std::string& directory, const std::string& engine_version) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const int n = q.node_count();
  nlohmann::json files = nlohmann::json::array();
  for (int k = 0; k <= q.computed_horizon(); ++k) {
    for (int i = 0; i < n; ++i) {
      const std::string name =
          "q_node" + std::to_string(i + 1) + "_k" + std::to_string(k) + ".txt";
      std::ofstream out(fs::path(directory) / name);
      const Polyhedron& p = q.At(i, k);
      out << "# " << engine_version << " graph " << q.graph().Digest() << "\n";
      out << "# safe set node " << (i + 1) << " horizon " << k << " (unit attacker)\n";
      out << "# halfspaces\n" << p.ToHText() << "# generators\n" << p.ToVText();
      if (!out) throw Error(ErrorKind::kValidation, "cannot write " + name);
      nlohmann::json vertices = nlohmann::json::array(), rays = nlohmann::json::array();
      if (!p.IsEmpty()) {
        for (const auto& v : p.generators().vertices) {
          nlohmann::json row = nlohmann::json::array();
          for (const auto& c : v) row.push_back(ToString(c));
          vertices.push_back(row);
        }
        for (const auto& r : p.generators().rays) {
          nlohmann::json row = nlohmann::json::array();
          for (const auto& c : r) row.push_back(ToString(c));
          rays.push_back(row);
        }
      }
      files.push_back({{"node", i + 1},
                       {"k", k},
                       {"file", name},
                       {"beta", RationalJson(report.beta[k][i])},
                       {"vertices", vertices},
                       {"rays", rays}});
    }
  }
  nlohmann::json manifest;
  manifest["engine_version"] = engine_version;
  manifest["graph_digest"] = q.graph().Digest();
  manifest["attacker_total"] = ToString(q.attacker_total());
  manifest["computed_horizon"] = q.computed_horizon();
  manifest["k_infinity"] = report.k_infinity ? nlohmann::json(*report.k_infinity)
                                             : nlohmann::json("not reached");
  nlohmann::json beta = nlohmann::json::array();
  for (const auto& row : report.beta) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& b : row) j.push_back(RationalJson(b));
    beta.push_back(j);
  }
  manifest["beta"] = beta;
  nlohmann::json alpha = nlohmann::json::array();
  for (const auto& a : report.alpha) alpha.push_back(RationalJson(a));
  manifest["alpha"] = alpha;
  manifest["alpha_infinity"] = report.alpha_infinity ? RationalJson(*report.alpha_infinity)
                                                     : nlohmann::json("not reached");
  manifest["lower_bound"] = report.lower_bound;
  manifest["upper_bound"] = report.upper_bound;
  manifest["files"] = files;
  std::ofstream out(fs::path(directory) / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kValidation, "cannot write manifest.json");
}

}  // namespace ddab
