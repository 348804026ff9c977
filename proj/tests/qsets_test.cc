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

#include <filesystem>
#include <random>

#include "ddab/error.h"
#include "ddab/game.h"
#include "doctest.h"

namespace ddab {
namespace {

Graph Load(const std::string& name) {
  return LoadGraphFile(std::string(DDAB_DATA_DIR) + "/graphs/" + name);
}

RationalVector E(int n, int i) {
  RationalVector e(n, 0);
  e[i] = 1;
  return e;
}

TEST_CASE("required vector of the three-node example") {
  Graph g = Load("fig3.txt");
  CHECK(RequiredVector(g, {1, 0, 2}) == RationalVector{3, 1, 2});
  CHECK(RequiredVector(g, {0, 0, 0}) == RationalVector{0, 0, 0});
  Polyhedron p = RequiredSet(g, {1, 0, 2});
  CHECK(p.Contains({3, 1, 2}));
  CHECK(p.MinimizeTotal().first == 6);
  CHECK(RequiredSet(g, {0, 0, 0}).Equals(Polyhedron(3)));
}

TEST_CASE("required vector on a pure cycle is the rotation") {
  Graph g = Graph::FromEdges(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(RequiredVector(g, {1, 0, 0}) == RationalVector{0, 1, 0});
}

TEST_CASE("required vector equals the in-neighbor sum") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    for (int e = 0; e < n; ++e) {
      edges.push_back({std::uniform_int_distribution<int>(0, n - 1)(rng),
                       std::uniform_int_distribution<int>(0, n - 1)(rng)});
    }
    Graph g = Graph::FromEdges(n, edges);
    RationalVector y(n);
    for (auto& v : y) v = Fraction(std::uniform_int_distribution<int>(0, 6)(rng), 2);
    RationalVector expected(n, 0);
    for (const auto& e : g.edges()) expected[e.to] += y[e.from];
    CHECK(RequiredVector(g, y) == expected);
  }
}

TEST_CASE("complete graph with self-loops is already at its fixed point") {
  Graph g = Load("complete3.txt");
  QSetFamily q = QProp(g);
  REQUIRE(q.k_infinity().has_value());
  CHECK(*q.k_infinity() == 0);
  for (int i = 0; i < 3; ++i) CHECK(q.At(i, 0).Equals(Polyhedron::ShiftedOrthant({1, 1, 1})));
  CrrReport r = Crr(q);
  CHECK(*r.alpha_infinity == 3);
  CHECK(CrrBounds(g) == std::pair<int, int>{3, 3});
}

TEST_CASE("three-node propagation example") {
  Graph g = Load("fig6.txt");
  QSetFamily q = QProp(g);
  REQUIRE(q.computed_horizon() >= 4);
  Polyhedron slice = q.At(0, 4).Intersect(Polyhedron::Simplex(3, 3));
  CHECK(slice.generators().vertices ==
        std::vector<RationalVector>{{0, 0, 3}, {0, 2, 1}, {1, 0, 2}, {1, 1, 1}});
  CHECK(q.At(0, 0).Contains({0, 0, 1}));
  CHECK_FALSE(q.At(0, 2).Contains({0, 0, 1}));
  CHECK(q.At(0, 2).Contains({0, 0, 2}));
  CHECK_FALSE(q.At(0, 4).Contains({0, 0, 2}));
  CHECK_FALSE(q.At(0, 0).Equals(q.At(0, 2)));
  // Node 1's set changes only from k = 1 to 2 and from k = 3 to 4.
  CHECK(q.At(0, 1).Equals(q.At(0, 0)));
  CHECK_FALSE(q.At(0, 2).Equals(q.At(0, 1)));
  CHECK(q.At(0, 3).Equals(q.At(0, 2)));
  CHECK_FALSE(q.At(0, 4).Equals(q.At(0, 3)));
  REQUIRE(q.k_infinity().has_value());
  CHECK(*q.k_infinity() == 4);
  CHECK(*Crr(q).alpha_infinity == 3);
}

TEST_CASE("ring topology variants") {
  CHECK(*Crr(QProp(Load("ring5.txt"))).alpha_infinity == 1);
  CHECK(*Crr(QProp(Load("ring5_chord.txt"))).alpha_infinity == 5);
  CHECK(*Crr(QProp(Load("ring5_chord_loop3.txt"))).alpha_infinity == 3);
  CHECK(CrrBounds(Load("ring5.txt")) == std::pair<int, int>{1, 25});
  QSetFamily ring = QProp(Load("ring5.txt"));
  CHECK(ring.At(0, *ring.k_infinity()).Equals(ring.At(0, *ring.k_infinity() + 1)));
}

TEST_CASE("non-convergence is reported, not raised") {
  QPropOptions opts;
  opts.max_iterations = 12;
  QSetFamily q = QProp(Load("nonconvergent5.txt"), opts);
  CHECK_FALSE(q.k_infinity().has_value());
  CHECK(q.computed_horizon() == 12);
  CrrReport r = Crr(q);
  CHECK_FALSE(r.alpha_infinity.has_value());
  CHECK_THROWS_AS(q.At(0, 13), ValidationError);
}

void CheckFamilyInvariants(const Graph& g) {
  QSetFamily q = QProp(g);
  const int n = g.node_count();
  ExtremeActionSet reversed(g.Reversed());
  for (int k = 1; k <= q.computed_horizon(); ++k) {
    for (int i = 0; i < n; ++i) {
      CHECK(q.At(i, k - 1).Includes(q.At(i, k)));
      for (int j : g.OutNeighbors(i)) CHECK(Beta(q, k, i) >= Beta(q, k - 1, j));
    }
  }
  CrrReport r = Crr(q);
  for (std::size_t k = 1; k < r.alpha.size(); ++k) CHECK(r.alpha[k] >= r.alpha[k - 1]);
  if (q.k_infinity()) {
    std::vector<Polyhedron> fixed;
    for (int i = 0; i < n; ++i) fixed.push_back(q.At(i, *q.k_infinity()));
    auto again = QSetUpdate(g, reversed, fixed);
    for (int i = 0; i < n; ++i) {
      CHECK(again[i].Equals(fixed[i]));
      CHECK(r.beta[*q.k_infinity()][i] == *r.alpha_infinity);
    }
    for (const auto& a : r.alpha) {
      CHECK(a >= r.lower_bound);
      CHECK(a <= r.upper_bound);
    }
  }
}

TEST_CASE("monotonicity, fixed point and bracketing") {
  for (const char* name : {"fig3.txt", "fig6.txt", "ring5.txt", "ring5_chord.txt",
                           "ring5_chord_loop4.txt", "ring5_chord_loop3.txt", "complete3.txt"}) {
    CAPTURE(name);
    CheckFamilyInvariants(Load(name));
  }
}

TEST_CASE("integer safe-set membership matches backward induction") {
  Graph g = Load("fig6.txt");
  QPropOptions opts;
  opts.horizon = 4;
  QSetFamily q = QProp(g, opts);
  Oracle oracle(g, 4, 1, 4, false);
  for (int x_total = 0; x_total <= 4; ++x_total) {
    for (const auto& x : Oracle::Compositions(3, x_total)) {
      RationalVector xr(x.begin(), x.end());
      for (int i = 0; i < 3; ++i) {
        std::vector<int> y(3, 0);
        y[i] = 1;
        for (int k = 0; k <= 4; ++k) CHECK(q.At(i, k).Contains(xr) == oracle.Defends(x, y, k + 1));
      }
    }
  }
}

TEST_CASE("dump writes one file per set and a manifest") {
  Graph g = Load("fig6.txt");
  QSetFamily q = QProp(g);
  auto dir = std::filesystem::temp_directory_path() / "ddab_qsets_test";
  std::filesystem::remove_all(dir);
  WriteQSetDump(q, Crr(q), dir.string(), "test");
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(std::filesystem::exists(dir / "q_node1_k4.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("six-node graph two-step ratio is seven halves") {
  Graph g = Load("fig8.txt");
  QSetFamily q = QProp(g);
  CrrReport r = Crr(q);
  REQUIRE(r.alpha.size() > 2);
  CHECK(r.alpha[2] == Fraction(7, 2));
  CHECK(r.beta[2][2] == Fraction(7, 2));
  // Three units cannot hold two steps against an attacker starting on node 3.
  CHECK(q.At(2, 2).Intersect(Polyhedron::Simplex(6, 3)).IsEmpty());
  CHECK(q.At(2, 2).Contains({0, 1, 1, 0, 1, Fraction(1, 2)}));
  auto [lo, hi] = CrrBounds(g);
  for (const auto& a : r.alpha) {
    CHECK(a >= lo);
    CHECK(a <= hi);
  }
}

}  // namespace
}  // namespace ddab
