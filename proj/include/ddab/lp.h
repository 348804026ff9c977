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

#ifndef DDAB_LP_H_
#define DDAB_LP_H_

#include <optional>
#include <vector>

#include "ddab/rational.h"

namespace ddab {

// Exact two-phase primal simplex on the standard form
//   minimize c.x  subject to  A x = b,  x >= 0
// with Bland's rule, so it terminates on degenerate problems. Dense and
// meant for the small systems that arise at desk scale.
struct LinearProgram {
  std::vector<RationalVector> a;  // m rows of length n
  RationalVector b;               // length m
  RationalVector c;               // length n, or empty for pure feasibility
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  RationalVector x;  // a basic (vertex) solution when status is kOptimal
  Rational objective;
};

LpResult SolveLinearProgram(const LinearProgram& lp);

}  // namespace ddab

#endif  // DDAB_LP_H_
