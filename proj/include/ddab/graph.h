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

#ifndef DDAB_GRAPH_H_
#define DDAB_GRAPH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddab/rational.h"

namespace ddab {

// Nodes are 0-based in code. Text formats and the wire API use 1-based
// labels, matching how graphs are usually drawn.
struct Edge {
  int from = 0;
  int to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Returns a (u, v) pair such that v is not reachable from u, or nullopt if
// the edge set is strongly connected. Endpoints must be in range.
std::optional<std::pair<int, int>> StrongConnectivityWitness(
    int node_count, const std::vector<Edge>& edges);

// An immutable, validated, strongly connected directed graph. Self-loops
// exist only where listed.
class Graph {
 public:
  // Throws ValidationError on out-of-range endpoints, a node without an
  // outgoing edge, or a graph that is not strongly connected.
  static Graph FromEdges(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool HasEdge(int from, int to) const {
    return adjacency_[static_cast<std::size_t>(to) * node_count_ + from] != 0;
  }
  // [A]_{ij} = 1 iff (j, i) is an edge.
  int Adjacency(int i, int j) const { return HasEdge(j, i) ? 1 : 0; }
  int OutDegree(int node) const {
    return static_cast<int>(out_neighbors_[node].size());
  }
  int InDegree(int node) const {
    return static_cast<int>(in_neighbors_[node].size());
  }
  // Ascending node order.
  const std::vector<int>& OutNeighbors(int node) const {
    return out_neighbors_[node];
  }
  const std::vector<int>& InNeighbors(int node) const {
    return in_neighbors_[node];
  }

  Graph Reversed() const;

  // Canonical text form; see ParseGraph.
  std::string ToText() const;
  // 16 hex digits of a 64-bit FNV-1a hash of ToText().
  std::string Digest() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  Graph() = default;

  int node_count_ = 0;
  std::vector<Edge> edges_;  // sorted, unique
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<int>> out_neighbors_;
  std::vector<std::vector<int>> in_neighbors_;
};

// Line-oriented format:
//   # comment
//   nodes N
//   edge j i        (traversal j -> i, 1-based labels)
// Throws ValidationError with a line number on malformed input.
Graph ParseGraph(std::string_view text);
Graph LoadGraphFile(const std::string& path);

int MaxOutDegree(const Graph& g);

// Length of the shortest directed cycle through each node.
std::vector<int> ShortestLoopLengths(const Graph& g);

enum class ActionRole { kDefender, kAttacker };

// A dense N x N rational matrix; entry (i, j) is the fraction of the
// resource on node j sent to node i.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(int n, ActionRole role = ActionRole::kDefender)
      : n_(n), role_(role), entries_(static_cast<std::size_t>(n) * n) {}

  static TransitionMatrix Identity(int n,
                                   ActionRole role = ActionRole::kDefender);
  static TransitionMatrix FromRows(const std::vector<RationalVector>& rows,
                                   ActionRole role = ActionRole::kDefender);

  int size() const { return n_; }
  ActionRole role() const { return role_; }
  void set_role(ActionRole role) { role_ = role; }
  Rational& at(int i, int j) {
    return entries_[static_cast<std::size_t>(i) * n_ + j];
  }
  const Rational& at(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * n_ + j];
  }

  RationalVector Apply(const RationalVector& x) const;
  std::vector<RationalVector> Rows() const;

  // Describes the first violated admissibility constraint (column sums,
  // nonnegativity, edge support) or returns nullopt.
  std::optional<std::string> ViolatedConstraint(const Graph& g) const;
  bool IsAdmissible(const Graph& g) const {
    return !ViolatedConstraint(g).has_value();
  }

  friend bool operator==(const TransitionMatrix& a,
                         const TransitionMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  int n_ = 0;
  ActionRole role_ = ActionRole::kDefender;
  std::vector<Rational> entries_;
};

inline constexpr std::uint64_t kDefaultExtremeActionCap = 1'000'000;

// The 0/1 admissible actions of a graph. Action `l` is identified by its
// choice vector: choice[j] is the single row holding the 1 in column j.
// Order: lexicographic in the choice vector with column 0 most significant
// and rows in ascending neighbor order.
class ExtremeActionSet {
 public:
  // Throws CapExceededError when the product of out-degrees exceeds `cap`.
  ExtremeActionSet(const Graph& g,
                   std::uint64_t cap = kDefaultExtremeActionCap,
                   ActionRole role = ActionRole::kDefender);

  int node_count() const { return static_cast<int>(neighbors_.size()); }
  std::uint64_t size() const { return count_; }
  ActionRole role() const { return role_; }

  std::vector<int> Choice(std::uint64_t index) const;
  std::uint64_t IndexOf(const std::vector<int>& choice) const;
  TransitionMatrix Matrix(std::uint64_t index) const;
  RationalVector Apply(std::uint64_t index, const RationalVector& x) const;

  // Streams every action in order; stop early by returning false.
  void ForEach(const std::function<bool(std::uint64_t,
                                        const std::vector<int>&)>& visit) const;
  std::vector<TransitionMatrix> Materialize() const;

  // Distinct images {K x : K extreme}, sorted lexicographically. Only
  // columns in the support of x are branched on.
  std::vector<RationalVector> DistinctImages(const RationalVector& x) const;

  const std::vector<int>& Neighbors(int column) const {
    return neighbors_[column];
  }

 private:
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t count_ = 1;
  ActionRole role_;
};

struct ActionDecomposition {
  RationalVector coefficients;  // indexed like the ExtremeActionSet
};

// lambda_l = product over columns j of K[choice_l(j), j]. Throws
// ValidationError when k is not admissible on g.
ActionDecomposition DecomposeAction(const Graph& g, const ExtremeActionSet& actions,
                                    const TransitionMatrix& k);
TransitionMatrix Recompose(const ExtremeActionSet& actions,
                           const ActionDecomposition& d);

}  // namespace ddab

#endif  // DDAB_GRAPH_H_
