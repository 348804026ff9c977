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

#include "ddab/polyhedron.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "ddab/error.h"
#include "double_description.h"

namespace ddab {
namespace {

bool HalfspaceLess(const Halfspace& a, const Halfspace& b) {
  if (a.normal != b.normal) return LexLess(a.normal, b.normal);
  return a.offset < b.offset;
}

// Scales (normal, offset) by a positive factor so that all entries are
// coprime integers.
void NormalizeRow(Halfspace& h) {
  RationalVector joint = h.normal;
  joint.push_back(h.offset);
  RationalVector abs_joint = joint;
  bool any = false;
  for (auto& v : abs_joint) {
    if (v != 0) any = true;
  }
  if (!any) return;
  // PrimitiveIntegerDirection keeps sign, scaling by a positive multiple.
  IntegerVector z = PrimitiveIntegerDirection(joint);
  for (std::size_t i = 0; i < h.normal.size(); ++i) h.normal[i] = z[i];
  h.offset = z.back();
}

RationalVector ToRational(const IntegerVector& z, std::size_t count) {
  RationalVector r(count);
  for (std::size_t i = 0; i < count; ++i) r[i] = z[i];
  return r;
}

IntegerVector HalfspaceConstraint(const Halfspace& h, bool negate) {
  RationalVector joint = h.normal;
  joint.push_back(-h.offset);
  if (negate) {
    for (auto& v : joint) v = -v;
  }
  IntegerVector z = PrimitiveIntegerDirection(joint);
  return z;
}

void CheckDim(int a, int b) {
  if (a != b) {
    throw ValidationError("dimension mismatch: " + std::to_string(a) + " vs " +
                          std::to_string(b));
  }
}

Generators PrimalGenerators(int dim, const std::vector<Halfspace>& ineqs,
                            const std::vector<Halfspace>& eqs) {
  std::vector<IntegerVector> cons;
  IntegerVector t_row(dim + 1, 0);
  t_row[dim] = 1;
  cons.push_back(t_row);
  for (int i = 0; i < dim; ++i) {
    IntegerVector e(dim + 1, 0);
    e[i] = 1;
    cons.push_back(std::move(e));
  }
  for (const auto& h : eqs) {
    cons.push_back(HalfspaceConstraint(h, false));
    cons.push_back(HalfspaceConstraint(h, true));
  }
  for (const auto& h : ineqs) cons.push_back(HalfspaceConstraint(h, false));
  auto cone = internal::ComputeCone(dim + 1, cons);
  Generators g;
  for (const auto& z : cone.rays) {
    if (z[dim] > 0) {
      RationalVector v(dim);
      for (int i = 0; i < dim; ++i) {
        v[i] = Rational(z[i], z[dim]);
        v[i].canonicalize();
      }
      g.vertices.push_back(std::move(v));
    } else {
      g.rays.push_back(ToRational(z, dim));
    }
  }
  std::sort(g.vertices.begin(), g.vertices.end(), LexLess);
  std::sort(g.rays.begin(), g.rays.end(), LexLess);
  return g;
}

}  // namespace

Allocation::Allocation(RationalVector values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0) {
      throw ValidationError("nonnegativity: allocation entry " +
                            std::to_string(i + 1) + " is " + ToString(values_[i]));
    }
  }
  total_ = Sum(values_);
}

Allocation Allocation::Concentrated(int n, int node, const Rational& amount) {
  RationalVector v(n, 0);
  v[node] = amount;
  return Allocation(std::move(v));
}

Polyhedron::Polyhedron(int dim) : dim_(dim), cache_(std::make_shared<Cache>()) {
  for (int i = 0; i < dim; ++i) {
    Halfspace h{RationalVector(dim, 0), 0};
    h.normal[i] = 1;
    ineqs_.push_back(std::move(h));
  }
  std::sort(ineqs_.begin(), ineqs_.end(), HalfspaceLess);
  Generators g;
  g.vertices.push_back(RationalVector(dim, 0));
  for (int i = dim - 1; i >= 0; --i) {
    RationalVector e(dim, 0);
    e[i] = 1;
    g.rays.push_back(std::move(e));
  }
  std::sort(g.rays.begin(), g.rays.end(), LexLess);
  cache_->generators = std::move(g);
  cache_->ready = true;
}

Polyhedron Polyhedron::Empty(int dim) {
  Polyhedron p(dim);
  p.empty_ = true;
  p.ineqs_ = {Halfspace{RationalVector(dim, 0), 1}};
  p.eqs_.clear();
  p.cache_ = std::make_shared<Cache>();
  return p;
}

Polyhedron Polyhedron::FromHalfspaces(const std::vector<Halfspace>& rows, int dim) {
  return FromConstraints(rows, {}, dim);
}

Polyhedron Polyhedron::FromConstraints(const std::vector<Halfspace>& inequalities,
                                       const std::vector<Halfspace>& equalities,
                                       int dim) {
  for (const auto& h : inequalities) CheckDim(static_cast<int>(h.normal.size()), dim);
  for (const auto& h : equalities) CheckDim(static_cast<int>(h.normal.size()), dim);
  Generators g = PrimalGenerators(dim, inequalities, equalities);
  if (g.vertices.empty()) return Empty(dim);
  Polyhedron p(dim);
  p.AdoptGenerators(std::move(g));
  return p;
}

Polyhedron Polyhedron::FromGenerators(int dim, const std::vector<RationalVector>& vertices,
                                      const std::vector<RationalVector>& rays) {
  if (vertices.empty()) return Empty(dim);
  std::set<RationalVector, decltype(&LexLess)> vs(&LexLess), rs(&LexLess);
  for (const auto& v : vertices) {
    CheckDim(static_cast<int>(v.size()), dim);
    for (const auto& c : v) {
      if (c < 0) throw ValidationError("nonnegativity: generator outside the orthant");
    }
    vs.insert(v);
  }
  for (const auto& r : rays) {
    CheckDim(static_cast<int>(r.size()), dim);
    bool nonzero = false;
    for (const auto& c : r) {
      if (c < 0) throw ValidationError("nonnegativity: ray outside the orthant");
      if (c != 0) nonzero = true;
    }
    if (nonzero) rs.insert(ToRational(PrimitiveIntegerDirection(r), dim));
  }
  Polyhedron p(dim);
  Generators g;
  g.vertices.assign(vs.begin(), vs.end());
  g.rays.assign(rs.begin(), rs.end());
  p.AdoptGenerators(std::move(g));
  // The supplied generators need not be minimal; recompute them lazily.
  p.cache_ = std::make_shared<Cache>();
  return p;
}

Polyhedron Polyhedron::ShiftedOrthant(const RationalVector& lower) {
  const int dim = static_cast<int>(lower.size());
  std::vector<Halfspace> rows;
  for (int i = 0; i < dim; ++i) {
    Halfspace h{RationalVector(dim, 0), lower[i]};
    h.normal[i] = 1;
    rows.push_back(std::move(h));
  }
  return FromHalfspaces(rows, dim);
}

Polyhedron Polyhedron::Simplex(int dim, const Rational& total) {
  Halfspace sum{RationalVector(dim, 1), total};
  return FromConstraints({}, {sum}, dim);
}

// Derives the canonical halfspace form from a generator description via
// the polar cone.
void Polyhedron::AdoptGenerators(Generators g) {
  const int d = dim_;
  std::vector<IntegerVector> cons;
  for (const auto& v : g.vertices) {
    RationalVector joint = v;
    joint.push_back(1);
    cons.push_back(PrimitiveIntegerDirection(joint));
  }
  for (const auto& r : g.rays) {
    RationalVector joint = r;
    joint.push_back(0);
    cons.push_back(PrimitiveIntegerDirection(joint));
  }
  auto polar = internal::ComputeCone(d + 1, cons);

  // Equalities: a.x = -beta for (a, beta) in the lineality space, in
  // reduced row echelon form.
  std::vector<RationalVector> rows;
  for (const auto& z : polar.lineality) rows.push_back(ToRational(z, d + 1));
  std::vector<int> pivots;
  std::size_t rank = 0;
  for (int c = 0; c < d && rank < rows.size(); ++c) {
    std::size_t sel = rank;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    Rational inv = 1 / rows[rank][c];
    for (auto& v : rows[rank]) v *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rational f = rows[r][c];
      for (int k = 0; k <= d; ++k) rows[r][k] -= f * rows[rank][k];
    }
    pivots.push_back(c);
    ++rank;
  }
  rows.resize(rank);
  std::vector<Halfspace> eqs;
  for (const auto& row : rows) {
    Halfspace h{RationalVector(row.begin(), row.begin() + d), -row[d]};
    NormalizeRow(h);
    eqs.push_back(std::move(h));
  }

  std::vector<Halfspace> ineqs;
  for (const auto& z : polar.rays) {
    RationalVector row = ToRational(z, d + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const int c = pivots[r];
      if (row[c] == 0) continue;
      Rational f = row[c];
      for (int k = 0; k <= d; ++k) row[k] -= f * rows[r][k];
    }
    bool trivial = true;
    for (int k = 0; k < d; ++k) {
      if (row[k] != 0) trivial = false;
    }
    if (trivial) continue;
    Halfspace h{RationalVector(row.begin(), row.begin() + d), -row[d]};
    NormalizeRow(h);
    ineqs.push_back(std::move(h));
  }
  std::sort(ineqs.begin(), ineqs.end(), HalfspaceLess);
  ineqs.erase(std::unique(ineqs.begin(), ineqs.end()), ineqs.end());
  std::sort(eqs.begin(), eqs.end(), HalfspaceLess);
  ineqs_ = std::move(ineqs);
  eqs_ = std::move(eqs);
  empty_ = false;
  cache_ = std::make_shared<Cache>();
  cache_->generators = std::move(g);
  cache_->ready = true;
}

const Generators& Polyhedron::generators() const {
  if (empty_) throw InfeasibleError("generators requested for the empty set");
  std::call_once(cache_->once, [this] {
    if (!cache_->ready) {
      cache_->generators = PrimalGenerators(dim_, ineqs_, eqs_);
      cache_->ready = true;
    }
  });
  return cache_->generators;
}

bool Polyhedron::Contains(const RationalVector& x) const {
  CheckDim(static_cast<int>(x.size()), dim_);
  if (empty_) return false;
  for (const auto& c : x) {
    if (c < 0) return false;
  }
  for (const auto& h : eqs_) {
    if (Dot(h.normal, x) != h.offset) return false;
  }
  for (const auto& h : ineqs_) {
    if (Dot(h.normal, x) < h.offset) return false;
  }
  return true;
}

bool Polyhedron::Includes(const Polyhedron& inner) const {
  CheckDim(inner.dim_, dim_);
  if (inner.empty_) return true;
  if (empty_) return false;
  const Generators& g = inner.generators();
  for (const auto& v : g.vertices) {
    if (!Contains(v)) return false;
  }
  for (const auto& r : g.rays) {
    for (const auto& h : eqs_) {
      if (Dot(h.normal, r) != 0) return false;
    }
    for (const auto& h : ineqs_) {
      if (Dot(h.normal, r) < 0) return false;
    }
  }
  return true;
}

bool Polyhedron::Equals(const Polyhedron& other) const {
  return Includes(other) && other.Includes(*this);
}

bool Polyhedron::IsBounded() const { return empty_ || generators().rays.empty(); }

Polyhedron Polyhedron::Intersect(const Polyhedron& other) const {
  CheckDim(other.dim_, dim_);
  if (empty_ || other.empty_) return Empty(dim_);
  if (Includes(other)) return other;
  if (other.Includes(*this)) return *this;
  std::vector<Halfspace> ineqs = ineqs_;
  ineqs.insert(ineqs.end(), other.ineqs_.begin(), other.ineqs_.end());
  std::vector<Halfspace> eqs = eqs_;
  eqs.insert(eqs.end(), other.eqs_.begin(), other.eqs_.end());
  return FromConstraints(ineqs, eqs, dim_);
}

Polyhedron Polyhedron::Scaled(const Rational& s) const {
  if (s <= 0) throw ValidationError("scale factor must be positive");
  if (empty_) return *this;
  Polyhedron p(dim_);
  p.ineqs_ = ineqs_;
  p.eqs_ = eqs_;
  for (auto& h : p.ineqs_) {
    h.offset *= s;
    NormalizeRow(h);
  }
  for (auto& h : p.eqs_) {
    h.offset *= s;
    NormalizeRow(h);
  }
  std::sort(p.ineqs_.begin(), p.ineqs_.end(), HalfspaceLess);
  std::sort(p.eqs_.begin(), p.eqs_.end(), HalfspaceLess);
  p.cache_ = std::make_shared<Cache>();
  Generators g = generators();
  for (auto& v : g.vertices) {
    for (auto& c : v) c *= s;
  }
  p.cache_->generators = std::move(g);
  p.cache_->ready = true;
  return p;
}

std::pair<Rational, RationalVector> Polyhedron::MinimizeTotal() const {
  if (empty_) throw InfeasibleError("minimum requested over the empty set");
  const auto& g = generators();
  const RationalVector* best = nullptr;
  Rational best_value;
  for (const auto& v : g.vertices) {
    Rational s = Sum(v);
    if (best == nullptr || s < best_value) {
      best = &v;
      best_value = s;
    }
  }
  // Vertices are sorted, so the first minimizer is the lexicographic one.
  return {best_value, *best};
}

std::string Polyhedron::ToHText() const {
  std::ostringstream out;
  auto row = [&](const RationalVector& a, const Rational& b) {
    out << "ge";
    for (const auto& c : a) out << ' ' << ToString(c);
    out << ' ' << ToString(b) << '\n';
  };
  for (const auto& h : eqs_) {
    row(h.normal, h.offset);
    RationalVector neg = h.normal;
    for (auto& c : neg) c = -c;
    row(neg, -h.offset);
  }
  for (const auto& h : ineqs_) row(h.normal, h.offset);
  return out.str();
}

std::string Polyhedron::ToVText() const {
  if (empty_) return "empty\n";
  std::ostringstream out;
  const auto& g = generators();
  for (const auto& v : g.vertices) {
    out << "vertex";
    for (const auto& c : v) out << ' ' << ToString(c);
    out << '\n';
  }
  for (const auto& r : g.rays) {
    out << "ray";
    for (const auto& c : r) out << ' ' << ToString(c);
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::vector<std::string>> Tokenize(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

RationalVector ParseEntries(const std::vector<std::string>& tokens, std::size_t from,
                            std::size_t count, std::size_t line) {
  if (tokens.size() != from + count) {
    throw ValidationError("line " + std::to_string(line) + ": expected " +
                          std::to_string(count) + " values after '" + tokens[0] + "'");
  }
  RationalVector v;
  for (std::size_t i = from; i < tokens.size(); ++i) v.push_back(ParseRational(tokens[i]));
  return v;
}

}  // namespace

Polyhedron ParsePolyhedronH(std::string_view text, int dim) {
  std::vector<Halfspace> rows;
  std::size_t n = 0;
  for (const auto& tokens : Tokenize(text)) {
    ++n;
    if (tokens[0] != "ge") {
      throw ValidationError("line " + std::to_string(n) + ": expected 'ge' row");
    }
    RationalVector v = ParseEntries(tokens, 1, dim + 1, n);
    Rational b = v.back();
    v.pop_back();
    rows.push_back({std::move(v), b});
  }
  return Polyhedron::FromHalfspaces(rows, dim);
}

Polyhedron ParsePolyhedronV(std::string_view text, int dim) {
  std::vector<RationalVector> vertices, rays;
  std::size_t n = 0;
  for (const auto& tokens : Tokenize(text)) {
    ++n;
    if (tokens[0] == "empty" && tokens.size() == 1) return Polyhedron::Empty(dim);
    if (tokens[0] == "vertex") {
      vertices.push_back(ParseEntries(tokens, 1, dim, n));
    } else if (tokens[0] == "ray") {
      rays.push_back(ParseEntries(tokens, 1, dim, n));
    } else {
      throw ValidationError("line " + std::to_string(n) + ": expected 'vertex' or 'ray'");
    }
  }
  return Polyhedron::FromGenerators(dim, vertices, rays);
}

Polyhedron ReachPoint(const ExtremeActionSet& actions, const RationalVector& x) {
  CheckDim(static_cast<int>(x.size()), actions.node_count());
  return Polyhedron::FromGenerators(actions.node_count(), actions.DistinctImages(x), {});
}

Polyhedron ReachPoly(const ExtremeActionSet& actions, const Polyhedron& p) {
  const int n = actions.node_count();
  CheckDim(p.dim(), n);
  if (p.IsEmpty()) throw InfeasibleError("reachable set of the empty set");
  const Generators& g = p.generators();
  std::set<RationalVector, decltype(&LexLess)> points(&LexLess), rays(&LexLess);
  for (const auto& r : g.rays) {
    for (auto& img : actions.DistinctImages(r)) {
      rays.insert(ToRational(PrimitiveIntegerDirection(img), n));
    }
  }
  for (const auto& v : g.vertices) {
    for (auto& img : actions.DistinctImages(v)) points.insert(std::move(img));
  }
  // When every unit direction is a ray the set is upward closed: the unit
  // rays generate the whole cone and dominated points are redundant.
  bool upward = true;
  for (int i = 0; i < n && upward; ++i) {
    RationalVector e(n, 0);
    e[i] = 1;
    upward = rays.count(e) > 0;
  }
  std::vector<RationalVector> pts(points.begin(), points.end());
  std::vector<RationalVector> rs(rays.begin(), rays.end());
  if (upward) {
    rs.clear();
    for (int i = 0; i < n; ++i) {
      RationalVector e(n, 0);
      e[i] = 1;
      rs.push_back(std::move(e));
    }
    // A dominated point is dominated by some minimal point, and dominators
    // never have a larger total, so one pass in order of total suffices.
    std::stable_sort(pts.begin(), pts.end(), [](const RationalVector& a,
                                                const RationalVector& b) {
      return Sum(a) < Sum(b);
    });
    std::vector<RationalVector> kept;
    for (const auto& cand : pts) {
      bool dominated = false;
      for (const auto& k : kept) {
        bool le = true;
        for (int i = 0; i < n && le; ++i) le = k[i] <= cand[i];
        if (le) {
          dominated = true;
          break;
        }
      }
      if (!dominated) kept.push_back(cand);
    }
    pts = std::move(kept);
  }
  return Polyhedron::FromGenerators(n, pts, rs);
}

}  // namespace ddab
