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

#include "ddab/graph.h"

#include <deque>
#include <set>

#include "ddab/error.h"
#include "doctest.h"

namespace ddab {
namespace {

Graph Ring3() { return Graph::FromEdges(3, {{0, 1}, {1, 2}, {2, 0}}); }

TEST_CASE("parsing uses 1-based labels and accepts comments") {
  Graph g = ParseGraph("# ring\nnodes 3\nedge 1 2\nedge 2 3 # tail\nedge 3 1\n");
  CHECK(g == Ring3());
  CHECK(g.HasEdge(0, 1));
  CHECK(g.Adjacency(1, 0) == 1);
  CHECK(g.Adjacency(0, 1) == 0);
  CHECK(ParseGraph(g.ToText()) == g);
}

TEST_CASE("malformed graph text reports the line") {
  try {
    ParseGraph("nodes 2\nedge 1 3\n");
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseGraph("edge 1 2\n"), ValidationError);
  CHECK_THROWS_AS(ParseGraph("nodes 2\nedge 1 2 3\n"), ValidationError);
}

TEST_CASE("a graph with a sink component is rejected") {
  // 1 -> 1, 2 -> 1, 3 -> 2, 3 -> 3: nothing leaves node 1.
  try {
    Graph::FromEdges(3, {{0, 0}, {1, 0}, {2, 1}, {2, 2}});
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("not strongly connected") != std::string::npos);
  }
  CHECK_THROWS_AS(Graph::FromEdges(2, {{0, 1}}), ValidationError);
}

TEST_CASE("digest depends only on the edge set") {
  Graph a = Graph::FromEdges(3, {{2, 0}, {0, 1}, {1, 2}, {0, 1}});
  CHECK(a.Digest() == Ring3().Digest());
  CHECK(a.Digest().size() == 16);
  Graph b = Graph::FromEdges(3, {{0, 1}, {1, 2}, {2, 0}, {0, 0}});
  CHECK(a.Digest() != b.Digest());
}

TEST_CASE("shortest loops and reversal") {
  Graph g = Graph::FromEdges(3, {{0, 1}, {1, 2}, {2, 0}, {1, 1}, {1, 0}});
  CHECK(ShortestLoopLengths(g) == std::vector<int>{2, 1, 3});
  Graph r = g.Reversed();
  CHECK(r.HasEdge(1, 0));
  CHECK(r.HasEdge(0, 2));
  CHECK(r.Reversed() == g);
  CHECK(MaxOutDegree(g) == 3);
}

TEST_CASE("extreme actions enumerate every 0/1 admissible matrix") {
  Graph g = Graph::FromEdges(3, {{0, 0}, {0, 1}, {1, 2}, {2, 0}, {2, 2}});
  ExtremeActionSet actions(g);
  CHECK(actions.size() == 4);
  std::set<std::vector<int>> seen;
  actions.ForEach([&](std::uint64_t index, const std::vector<int>& choice) {
    CHECK(actions.IndexOf(choice) == index);
    CHECK(actions.Matrix(index).IsAdmissible(g));
    seen.insert(choice);
    return true;
  });
  CHECK(seen.size() == 4);
  CHECK_THROWS_AS(ExtremeActionSet(g, 3), CapExceededError);
}

TEST_CASE("distinct images branch only on the support") {
  Graph g = Graph::FromEdges(3, {{0, 0}, {0, 1}, {1, 2}, {2, 0}, {2, 2}});
  ExtremeActionSet actions(g);
  auto images = actions.DistinctImages({1, 0, 0});
  CHECK(images == std::vector<RationalVector>{{0, 1, 0}, {1, 0, 0}});
  auto all = actions.DistinctImages({1, 1, 1});
  CHECK(all.size() == 4);
}

TEST_CASE("admissibility names the violated constraint") {
  Graph g = Ring3();
  TransitionMatrix k = TransitionMatrix::Identity(3);
  auto why = k.ViolatedConstraint(g);
  REQUIRE(why.has_value());
  CHECK(why->rfind("adjacency", 0) == 0);
  TransitionMatrix m(3);
  m.at(1, 0) = 1;
  m.at(2, 1) = 1;
  m.at(0, 2) = Rational(1, 2);
  CHECK(m.ViolatedConstraint(g)->rfind("column-sum", 0) == 0);
  m.at(0, 2) = 1;
  CHECK(m.IsAdmissible(g));
}

TEST_CASE("decomposition into extreme actions recomposes exactly") {
  Graph g = Graph::FromEdges(3, {{0, 0}, {0, 1}, {1, 2}, {2, 0}, {2, 2}, {1, 1}});
  ExtremeActionSet actions(g);
  TransitionMatrix k(3);
  k.at(0, 0) = Rational(1, 3);
  k.at(1, 0) = Rational(2, 3);
  k.at(1, 1) = Rational(1, 4);
  k.at(2, 1) = Rational(3, 4);
  k.at(0, 2) = Rational(1, 2);
  k.at(2, 2) = Rational(1, 2);
  auto d = DecomposeAction(g, actions, k);
  CHECK(Sum(d.coefficients) == 1);
  for (const auto& c : d.coefficients) CHECK(c >= 0);
  CHECK(Recompose(actions, d) == k);
}

Graph SixNode() { return LoadGraphFile(std::string(DDAB_DATA_DIR) + "/graphs/fig8.txt"); }

TEST_CASE("six-node graph basics") {
  Graph g = SixNode();
  CHECK(g.node_count() == 6);
  CHECK(g.edges().size() == 17);
  CHECK(g.Reversed().Reversed() == g);
  CHECK_FALSE(g.HasEdge(1, 1));  // node 2 has no self-loop
  CHECK(MaxOutDegree(g) == 3);
  CHECK(ParseGraph(g.ToText()) == g);
}

TEST_CASE("six-node extreme action count is the out-degree product") {
  Graph g = SixNode();
  ExtremeActionSet actions(g);
  std::uint64_t product = 1;
  for (int j = 0; j < g.node_count(); ++j) product *= static_cast<std::uint64_t>(g.OutDegree(j));
  CHECK(actions.size() == product);
  std::uint64_t visited = 0;
  std::set<std::vector<int>> seen;
  actions.ForEach([&](std::uint64_t, const std::vector<int>& choice) {
    ++visited;
    seen.insert(choice);
    return true;
  });
  CHECK(visited == product);
  CHECK(seen.size() == product);
}

TEST_CASE("shortest loops agree with breadth-first search") {
  for (const char* name : {"fig8.txt", "fig6.txt", "ring5_chord.txt", "nonconvergent5.txt"}) {
    CAPTURE(name);
    Graph g = LoadGraphFile(std::string(DDAB_DATA_DIR) + "/graphs/" + name);
    const int n = g.node_count();
    std::vector<int> loops = ShortestLoopLengths(g);
    for (int i = 0; i < n; ++i) {
      // Distance from each out-neighbor back to i, plus the first hop.
      int best = -1;
      for (int start : g.OutNeighbors(i)) {
        std::vector<int> dist(n, -1);
        std::deque<int> queue{start};
        dist[start] = 0;
        while (!queue.empty()) {
          int u = queue.front();
          queue.pop_front();
          for (int v : g.OutNeighbors(u)) {
            if (dist[v] < 0) {
              dist[v] = dist[u] + 1;
              queue.push_back(v);
            }
          }
        }
        if (dist[i] >= 0 && (best < 0 || dist[i] + 1 < best)) best = dist[i] + 1;
      }
      CHECK(loops[i] == best);
    }
  }
}

}  // namespace
}  // namespace ddab
