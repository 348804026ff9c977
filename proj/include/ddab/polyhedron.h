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

// Exact convex polyhedra inside the nonnegative orthant, kept in both
// halfspace and generator form.

#ifndef DDAB_POLYHEDRON_H_
#define DDAB_POLYHEDRON_H_

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddab/graph.h"
#include "ddab/rational.h"

namespace ddab {

// A nonnegative resource allocation over the nodes.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(RationalVector values);  // throws ValidationError

  static Allocation Concentrated(int n, int node, const Rational& amount);

  const RationalVector& values() const { return values_; }
  const Rational& total() const { return total_; }
  int size() const { return static_cast<int>(values_.size()); }
  const Rational& operator[](int i) const { return values_[i]; }

  bool operator==(const Allocation& o) const { return values_ == o.values_; }

 private:
  RationalVector values_;
  Rational total_ = 0;
};

// normal . x >= offset
struct Halfspace {
  RationalVector normal;
  Rational offset;

  bool operator==(const Halfspace& o) const {
    return normal == o.normal && offset == o.offset;
  }
};

struct Generators {
  std::vector<RationalVector> vertices;  // sorted lexicographically
  std::vector<RationalVector> rays;      // primitive integer directions, sorted
};

class Polyhedron {
 public:
  // The nonnegative orthant of dimension `dim`.
  explicit Polyhedron(int dim = 0);

  // {x >= 0 : every row holds}. Equalities may be passed as two rows.
  static Polyhedron FromHalfspaces(const std::vector<Halfspace>& rows, int dim);
  // Same, with explicit equalities normal . x == offset.
  static Polyhedron FromConstraints(const std::vector<Halfspace>& inequalities,
                                    const std::vector<Halfspace>& equalities,
                                    int dim);
  // conv(vertices) + cone(rays); every generator must lie in the orthant.
  static Polyhedron FromGenerators(int dim, const std::vector<RationalVector>& vertices,
                                   const std::vector<RationalVector>& rays);
  static Polyhedron Empty(int dim);
  // {x >= lower componentwise}.
  static Polyhedron ShiftedOrthant(const RationalVector& lower);
  // {x >= 0 : sum x == total}.
  static Polyhedron Simplex(int dim, const Rational& total);

  int dim() const { return dim_; }
  bool IsEmpty() const { return empty_; }

  // Canonical facet inequalities (orthant facets included when they are
  // facets) and canonical implicit equalities.
  const std::vector<Halfspace>& inequalities() const { return ineqs_; }
  const std::vector<Halfspace>& equalities() const { return eqs_; }

  // Throws InfeasibleError on the empty set.
  const Generators& generators() const;

  bool Contains(const RationalVector& x) const;
  bool Contains(const Allocation& x) const { return Contains(x.values()); }
  // True when `inner` is a subset of this set.
  bool Includes(const Polyhedron& inner) const;
  bool Equals(const Polyhedron& other) const;
  bool IsBounded() const;

  Polyhedron Intersect(const Polyhedron& other) const;
  // {s x : x in P} for s > 0.
  Polyhedron Scaled(const Rational& s) const;

  // min sum(x) over the set with the lexicographically smallest minimizing
  // vertex. Throws InfeasibleError on empty input.
  std::pair<Rational, RationalVector> MinimizeTotal() const;

  // `ge a1 .. aN b` rows, equalities expanded into two rows.
  std::string ToHText() const;
  // `vertex ...` and `ray ...` rows; `empty` for the empty set.
  std::string ToVText() const;

 private:
  struct Cache {
    std::once_flag once;
    bool ready = false;
    Generators generators;
  };

  void Canonicalize(std::vector<Halfspace> ineqs, std::vector<Halfspace> eqs);
  void AdoptGenerators(Generators g);

  int dim_ = 0;
  bool empty_ = false;
  std::vector<Halfspace> ineqs_;
  std::vector<Halfspace> eqs_;
  std::shared_ptr<Cache> cache_;
};

Polyhedron ParsePolyhedronH(std::string_view text, int dim);
Polyhedron ParsePolyhedronV(std::string_view text, int dim);

// R(x): convex hull of the images of x under every extreme action.
Polyhedron ReachPoint(const ExtremeActionSet& actions, const RationalVector& x);
// R(P): images of the vertices (hull part) and rays (cone part) of P.
Polyhedron ReachPoly(const ExtremeActionSet& actions, const Polyhedron& p);

}  // namespace ddab

#endif  // DDAB_POLYHEDRON_H_
