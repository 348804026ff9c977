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

#include "double_description.h"

#include <cstdint>
#include <utility>

namespace ddab::internal {
namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void Set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  Bits And(const Bits& o) const {
    Bits r;
    r.words_.resize(words_.size());
    for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
    return r;
  }
  bool Contains(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if ((o.words_[w] & ~words_[w]) != 0) return false;
    }
    return true;
  }
  int Count() const {
    int c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

Integer DotInt(const IntegerVector& a, const IntegerVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  }
  return s;
}

// u <- s*u - t*v, then made primitive.
void Combine(IntegerVector& u, const Integer& s, const IntegerVector& v,
             const Integer& t) {
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = s * u[i] - t * v[i];
  MakePrimitive(u);
}

struct Ray {
  IntegerVector z;
  Bits tight;
};

}  // namespace

ConeGenerators ComputeCone(int dim, const std::vector<IntegerVector>& constraints) {
  const std::size_t m = constraints.size();
  std::vector<IntegerVector> lineality;
  for (int i = 0; i < dim; ++i) {
    IntegerVector e(dim, 0);
    e[i] = 1;
    lineality.push_back(std::move(e));
  }
  std::vector<Ray> rays;

  for (std::size_t k = 0; k < m; ++k) {
    const IntegerVector& h = constraints[k];

    // A lineality direction not orthogonal to h becomes a ray; the rest of
    // the lineality space and all rays are projected onto h.z = 0.
    std::size_t pick = lineality.size();
    Integer hl;
    for (std::size_t i = 0; i < lineality.size(); ++i) {
      hl = DotInt(h, lineality[i]);
      if (hl != 0) {
        pick = i;
        break;
      }
    }
    if (pick != lineality.size()) {
      IntegerVector l = std::move(lineality[pick]);
      lineality.erase(lineality.begin() + static_cast<std::ptrdiff_t>(pick));
      if (hl < 0) {
        for (auto& x : l) x = -x;
        hl = -hl;
      }
      for (auto& other : lineality) {
        Integer ho = DotInt(h, other);
        if (ho != 0) Combine(other, hl, l, ho);
      }
      for (auto& r : rays) {
        Integer hr = DotInt(h, r.z);
        if (hr != 0) Combine(r.z, hl, l, hr);
        r.tight.Set(k);
      }
      Ray fresh{std::move(l), Bits(m)};
      for (std::size_t j = 0; j < k; ++j) fresh.tight.Set(j);
      rays.push_back(std::move(fresh));
      continue;
    }

    std::vector<Integer> value(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = DotInt(h, rays[r].z);
      if (value[r] > 0) {
        pos.push_back(r);
      } else if (value[r] < 0) {
        neg.push_back(r);
      }
    }
    if (neg.empty()) {
      for (std::size_t r = 0; r < rays.size(); ++r) {
        if (value[r] == 0) rays[r].tight.Set(k);
      }
      continue;
    }

    const int min_common = dim - static_cast<int>(lineality.size()) - 2;
    std::vector<Ray> created;
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        Bits common = rays[p].tight.And(rays[n].tight);
        if (common.Count() < min_common) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (rays[r].tight.Contains(common)) adjacent = false;
        }
        if (!adjacent) continue;
        IntegerVector z = rays[n].z;
        Combine(z, value[p], rays[p].z, value[n]);
        common.Set(k);
        created.push_back({std::move(z), std::move(common)});
      }
    }
    std::vector<Ray> next;
    next.reserve(rays.size() - neg.size() + created.size());
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (value[r] > 0) {
        next.push_back(std::move(rays[r]));
      } else if (value[r] == 0) {
        rays[r].tight.Set(k);
        next.push_back(std::move(rays[r]));
      }
    }
    for (auto& c : created) next.push_back(std::move(c));
    rays = std::move(next);
  }

  ConeGenerators out;
  out.lineality = std::move(lineality);
  out.rays.reserve(rays.size());
  for (auto& r : rays) out.rays.push_back(std::move(r.z));
  return out;
}

}  // namespace ddab::internal
