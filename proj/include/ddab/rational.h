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

#ifndef DDAB_RATIONAL_H_
#define DDAB_RATIONAL_H_

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ddab {

// Every quantity in the engine is an exact rational; there is no floating
// point mode.
using Rational = mpq_class;
using Integer = mpz_class;
using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

// Accepts "p", "p/q" and finite decimals such as "-3.25" or "1e-2"-free
// forms like ".5". Decimals are converted exactly. Throws ValidationError.
Rational ParseRational(std::string_view text);

// "p/q", or "p" when the denominator is one.
std::string ToString(const Rational& r);

// Decimal rendering rounded half away from zero to `digits` places, with
// trailing zeros trimmed.
std::string ToDecimal(const Rational& r, int digits = 6);

// Comma-free bracketed rendering "(a, b, c)" used in diagnostics.
std::string ToString(const RationalVector& v);

// p/q in lowest terms; q must be nonzero.
Rational Fraction(const Integer& p, const Integer& q);

Rational Sum(const RationalVector& v);
Rational Dot(const RationalVector& a, const RationalVector& b);

// Lexicographic comparison helper for deterministic ordering.
bool LexLess(const RationalVector& a, const RationalVector& b);

// Scales a rational vector to the primitive integer vector with the same
// direction (positive multiple). A zero vector maps to zeros.
IntegerVector PrimitiveIntegerDirection(const RationalVector& v);
void MakePrimitive(IntegerVector& v);

}  // namespace ddab

#endif  // DDAB_RATIONAL_H_
