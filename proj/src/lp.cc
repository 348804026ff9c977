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

#include "ddab/lp.h"

#include <cstddef>

#include "ddab/error.h"

namespace ddab {
namespace {

class Tableau {
 public:
  // rows: m constraint rows plus one objective row; columns: n variables
  // plus the right-hand side.
  Tableau(std::size_t m, std::size_t n)
      : m_(m), n_(n), cells_((m + 1) * (n + 1)), basis_(m) {}

  Rational& at(std::size_t r, std::size_t c) { return cells_[r * (n_ + 1) + c]; }
  Rational& rhs(std::size_t r) { return at(r, n_); }
  Rational& cost(std::size_t c) { return at(m_, c); }
  std::vector<std::size_t>& basis() { return basis_; }

  void Pivot(std::size_t row, std::size_t col) {
    Rational p = at(row, col);
    for (std::size_t c = 0; c <= n_; ++c) at(row, c) /= p;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == row || at(r, col) == 0) continue;
      Rational f = at(r, col);
      for (std::size_t c = 0; c <= n_; ++c) {
        if (at(row, c) != 0) at(r, c) -= f * at(row, c);
      }
    }
    basis_[row] = col;
  }

  // Runs Bland-rule iterations over columns [0, allowed). Returns false if
  // the objective is unbounded below.
  bool Optimize(std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (cost(c) < 0) {
          enter = c;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = m_;
      Rational best_ratio;
      for (std::size_t r = 0; r < m_; ++r) {
        if (at(r, enter) <= 0) continue;
        Rational ratio = rhs(r) / at(r, enter);
        if (leave == m_ || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == m_) return false;
      Pivot(leave, enter);
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<Rational> cells_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult SolveLinearProgram(const LinearProgram& lp) {
  const std::size_t m = lp.a.size();
  const std::size_t n = m ? lp.a[0].size() : lp.c.size();
  if (lp.b.size() != m) throw ValidationError("lp: rhs size mismatch");
  for (const auto& row : lp.a) {
    if (row.size() != n) throw ValidationError("lp: ragged constraint matrix");
  }
  if (!lp.c.empty() && lp.c.size() != n) throw ValidationError("lp: cost size mismatch");

  // Variables: n structural, then m artificials.
  Tableau t(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = lp.b[r] < 0;
    for (std::size_t c = 0; c < n; ++c) {
      t.at(r, c) = flip ? Rational(-lp.a[r][c]) : lp.a[r][c];
    }
    t.at(r, n + r) = 1;
    t.rhs(r) = flip ? Rational(-lp.b[r]) : lp.b[r];
    t.basis()[r] = n + r;
  }
  // Phase one: minimize the sum of artificials.
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.cost(c) -= t.at(r, c);
    t.cost(n + m) -= t.rhs(r);
  }
  t.Optimize(n + m);
  LpResult result;
  if (t.cost(n + m) != 0) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  // Drive remaining artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (t.at(r, c) != 0) {
        t.Pivot(r, c);
        break;
      }
    }
  }
  // Phase two over structural columns only.
  for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) = 0;
  if (!lp.c.empty()) {
    for (std::size_t c = 0; c < n; ++c) t.cost(c) = lp.c[c];
    for (std::size_t r = 0; r < m; ++r) {
      std::size_t b = t.basis()[r];
      if (b >= n || t.cost(b) == 0) continue;
      Rational f = t.cost(b);
      for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) -= f * t.at(r, c);
    }
    if (!t.Optimize(n)) {
      result.status = LpStatus::kUnbounded;
      return result;
    }
  }
  result.status = LpStatus::kOptimal;
  result.x.assign(n, 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) result.x[t.basis()[r]] = t.rhs(r);
  }
  for (std::size_t c = 0; c < n && !lp.c.empty(); ++c) {
    result.objective += lp.c[c] * result.x[c];
  }
  return result;
}

}  // namespace ddab
