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

#include <algorithm>
#include <deque>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "ddab/error.h"

namespace ddab {
namespace {

std::vector<bool> Reachable(int n, const std::vector<std::vector<int>>& adj,
                            int source) {
  std::vector<bool> seen(n, false);
  std::deque<int> queue{source};
  seen[source] = true;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

std::optional<std::pair<int, int>> StrongConnectivityWitness(
    int node_count, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> fwd(node_count), bwd(node_count);
  for (const Edge& e : edges) {
    fwd[e.from].push_back(e.to);
    bwd[e.to].push_back(e.from);
  }
  auto forward = Reachable(node_count, fwd, 0);
  for (int v = 0; v < node_count; ++v) {
    if (!forward[v]) return std::pair{0, v};
  }
  auto backward = Reachable(node_count, bwd, 0);
  for (int v = 0; v < node_count; ++v) {
    if (!backward[v]) return std::pair{v, 0};
  }
  return std::nullopt;
}

Graph Graph::FromEdges(int node_count, std::vector<Edge> edges) {
  if (node_count < 1) throw ValidationError("graph needs at least one node");
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= node_count || e.to < 0 || e.to >= node_count) {
      throw ValidationError("edge " + std::to_string(e.from + 1) + " -> " +
                            std::to_string(e.to + 1) +
                            " has an endpoint out of range 1.." +
                            std::to_string(node_count));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.node_count_ = node_count;
  g.edges_ = std::move(edges);
  g.adjacency_.assign(static_cast<std::size_t>(node_count) * node_count, 0);
  g.out_neighbors_.resize(node_count);
  g.in_neighbors_.resize(node_count);
  for (const Edge& e : g.edges_) {
    g.adjacency_[static_cast<std::size_t>(e.to) * node_count + e.from] = 1;
    g.out_neighbors_[e.from].push_back(e.to);
    g.in_neighbors_[e.to].push_back(e.from);
  }
  for (auto& v : g.in_neighbors_) std::sort(v.begin(), v.end());
  for (int j = 0; j < node_count; ++j) {
    if (g.out_neighbors_[j].empty()) {
      throw ValidationError("node " + std::to_string(j + 1) +
                            " has no outgoing edge");
    }
  }
  if (auto w = StrongConnectivityWitness(node_count, g.edges_)) {
    throw ValidationError("graph is not strongly connected: no path from " +
                          std::to_string(w->first + 1) + " to " +
                          std::to_string(w->second + 1));
  }
  return g;
}

Graph Graph::Reversed() const {
  std::vector<Edge> flipped;
  flipped.reserve(edges_.size());
  for (const Edge& e : edges_) flipped.push_back({e.to, e.from});
  return FromEdges(node_count_, std::move(flipped));
}

std::string Graph::ToText() const {
  std::ostringstream os;
  os << "nodes " << node_count_ << "\n";
  for (const Edge& e : edges_) {
    os << "edge " << e.from + 1 << " " << e.to + 1 << "\n";
  }
  return os.str();
}

std::string Graph::Digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : ToText()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Graph ParseGraph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int n = -1;
  std::vector<Edge> edges;
  auto fail = [&](const std::string& why) {
    throw ValidationError("graph line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    if (keyword == "nodes") {
      if (n != -1) fail("duplicate 'nodes' line");
      if (!(fields >> n) || n < 1) fail("'nodes' needs a positive count");
    } else if (keyword == "edge") {
      if (n == -1) fail("'edge' before 'nodes'");
      long long from = 0, to = 0;
      if (!(fields >> from >> to)) fail("'edge' needs two node labels");
      if (from < 1 || from > n || to < 1 || to > n) {
        fail("edge endpoint out of range 1.." + std::to_string(n));
      }
      edges.push_back({static_cast<int>(from - 1), static_cast<int>(to - 1)});
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
    std::string extra;
    if (fields >> extra) fail("trailing token '" + extra + "'");
  }
  if (n == -1) throw ValidationError("graph text has no 'nodes' line");
  return Graph::FromEdges(n, std::move(edges));
}

Graph LoadGraphFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseGraph(buf.str());
}

int MaxOutDegree(const Graph& g) {
  int d = 0;
  for (int j = 0; j < g.node_count(); ++j) d = std::max(d, g.OutDegree(j));
  return d;
}

std::vector<int> ShortestLoopLengths(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> result(n);
  for (int i = 0; i < n; ++i) {
    // BFS from i; the loop closes on the first edge back into i.
    std::vector<int> dist(n, -1);
    std::deque<int> queue{i};
    dist[i] = 0;
    int best = std::numeric_limits<int>::max();
    while (!queue.empty() && best == std::numeric_limits<int>::max()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : g.OutNeighbors(u)) {
        if (v == i) {
          best = std::min(best, dist[u] + 1);
        } else if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    result[i] = best;
  }
  return result;
}

TransitionMatrix TransitionMatrix::Identity(int n, ActionRole role) {
  TransitionMatrix m(n, role);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

TransitionMatrix TransitionMatrix::FromRows(const std::vector<RationalVector>& rows,
                                            ActionRole role) {
  const int n = static_cast<int>(rows.size());
  TransitionMatrix m(n, role);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw ValidationError("transition matrix must be square");
    }
    for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

RationalVector TransitionMatrix::Apply(const RationalVector& x) const {
  if (static_cast<int>(x.size()) != n_) {
    throw ValidationError("dimension mismatch applying transition matrix");
  }
  RationalVector out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (at(i, j) != 0) out[i] += at(i, j) * x[j];
    }
  }
  return out;
}

std::vector<RationalVector> TransitionMatrix::Rows() const {
  std::vector<RationalVector> rows(n_, RationalVector(n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) rows[i][j] = at(i, j);
  }
  return rows;
}

std::optional<std::string> TransitionMatrix::ViolatedConstraint(const Graph& g) const {
  if (n_ != g.node_count()) return "dimension: matrix size does not match graph";
  for (int j = 0; j < n_; ++j) {
    Rational col = 0;
    for (int i = 0; i < n_; ++i) {
      if (at(i, j) < 0) {
        return "nonnegativity: entry (" + std::to_string(i + 1) + "," +
               std::to_string(j + 1) + ") is negative";
      }
      if (at(i, j) != 0 && !g.HasEdge(j, i)) {
        return "adjacency: moves resource along non-edge " +
               std::to_string(j + 1) + " -> " + std::to_string(i + 1);
      }
      col += at(i, j);
    }
    if (col != 1) {
      return "column-sum: column " + std::to_string(j + 1) + " sums to " +
             ToString(col);
    }
  }
  return std::nullopt;
}

ExtremeActionSet::ExtremeActionSet(const Graph& g, std::uint64_t cap,
                                   ActionRole role)
    : role_(role) {
  const int n = g.node_count();
  neighbors_.resize(n);
  stride_.assign(n, 1);
  Integer product = 1;
  for (int j = 0; j < n; ++j) {
    neighbors_[j] = g.OutNeighbors(j);
    product *= static_cast<unsigned long>(neighbors_[j].size());
  }
  if (product > Integer(std::to_string(cap))) {
    throw CapExceededError("extreme action count " + product.get_str() +
                           " exceeds cap " + std::to_string(cap));
  }
  count_ = product.get_ui();
  for (int j = n - 2; j >= 0; --j) {
    stride_[j] = stride_[j + 1] * neighbors_[j + 1].size();
  }
}

std::vector<int> ExtremeActionSet::Choice(std::uint64_t index) const {
  std::vector<int> choice(neighbors_.size());
  for (std::size_t j = 0; j < neighbors_.size(); ++j) {
    choice[j] = neighbors_[j][(index / stride_[j]) % neighbors_[j].size()];
  }
  return choice;
}

std::uint64_t ExtremeActionSet::IndexOf(const std::vector<int>& choice) const {
  std::uint64_t index = 0;
  for (std::size_t j = 0; j < neighbors_.size(); ++j) {
    auto it = std::find(neighbors_[j].begin(), neighbors_[j].end(), choice[j]);
    if (it == neighbors_[j].end()) {
      throw ValidationError("choice is not an edge of the graph");
    }
    index += stride_[j] * static_cast<std::uint64_t>(it - neighbors_[j].begin());
  }
  return index;
}

TransitionMatrix ExtremeActionSet::Matrix(std::uint64_t index) const {
  auto choice = Choice(index);
  TransitionMatrix m(node_count(), role_);
  for (int j = 0; j < node_count(); ++j) m.at(choice[j], j) = 1;
  return m;
}

RationalVector ExtremeActionSet::Apply(std::uint64_t index,
                                       const RationalVector& x) const {
  auto choice = Choice(index);
  RationalVector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[choice[j]] += x[j];
  return out;
}

void ExtremeActionSet::ForEach(
    const std::function<bool(std::uint64_t, const std::vector<int>&)>& visit) const {
  const int n = node_count();
  std::vector<std::size_t> digit(n, 0);
  std::vector<int> choice(n);
  for (int j = 0; j < n; ++j) choice[j] = neighbors_[j][0];
  for (std::uint64_t index = 0; index < count_; ++index) {
    if (!visit(index, choice)) return;
    for (int j = n - 1; j >= 0; --j) {
      if (++digit[j] < neighbors_[j].size()) {
        choice[j] = neighbors_[j][digit[j]];
        break;
      }
      digit[j] = 0;
      choice[j] = neighbors_[j][0];
    }
  }
}

std::vector<TransitionMatrix> ExtremeActionSet::Materialize() const {
  std::vector<TransitionMatrix> out;
  out.reserve(count_);
  ForEach([&](std::uint64_t, const std::vector<int>& choice) {
    TransitionMatrix m(node_count(), role_);
    for (int j = 0; j < node_count(); ++j) m.at(choice[j], j) = 1;
    out.push_back(std::move(m));
    return true;
  });
  return out;
}

std::vector<RationalVector> ExtremeActionSet::DistinctImages(
    const RationalVector& x) const {
  const int n = node_count();
  std::vector<int> support;
  for (int j = 0; j < n; ++j) {
    if (x[j] != 0) support.push_back(j);
  }
  std::set<RationalVector> images;
  RationalVector current(n);
  // Depth-first over the support columns; zero columns never move mass.
  std::function<void(std::size_t)> branch = [&](std::size_t depth) {
    if (depth == support.size()) {
      images.insert(current);
      return;
    }
    int j = support[depth];
    for (int dest : neighbors_[j]) {
      current[dest] += x[j];
      branch(depth + 1);
      current[dest] -= x[j];
    }
  };
  branch(0);
  return {images.begin(), images.end()};
}

ActionDecomposition DecomposeAction(const Graph& g, const ExtremeActionSet& actions,
                                    const TransitionMatrix& k) {
  if (auto why = k.ViolatedConstraint(g)) {
    throw ValidationError("cannot decompose inadmissible action: " + *why);
  }
  ActionDecomposition d;
  d.coefficients.resize(actions.size());
  actions.ForEach([&](std::uint64_t index, const std::vector<int>& choice) {
    Rational lambda = 1;
    for (int j = 0; j < actions.node_count() && lambda != 0; ++j) {
      lambda *= k.at(choice[j], j);
    }
    d.coefficients[index] = lambda;
    return true;
  });
  return d;
}

TransitionMatrix Recompose(const ExtremeActionSet& actions,
                           const ActionDecomposition& d) {
  TransitionMatrix m(actions.node_count(), actions.role());
  actions.ForEach([&](std::uint64_t index, const std::vector<int>& choice) {
    const Rational& lambda = d.coefficients[index];
    if (lambda != 0) {
      for (int j = 0; j < actions.node_count(); ++j) m.at(choice[j], j) += lambda;
    }
    return true;
  });
  return m;
}

}  // namespace ddab
