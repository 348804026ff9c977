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

#include "ddab/rational.h"

#include "ddab/error.h"
#include "doctest.h"

namespace ddab {
namespace {

TEST_CASE("ParseRational accepts integers, fractions and exact decimals") {
  CHECK(ParseRational("3") == 3);
  CHECK(ParseRational("-7/2") == Rational(-7, 2));
  CHECK(ParseRational("6/4") == Rational(3, 2));
  CHECK(ParseRational("3.5") == Rational(7, 2));
  CHECK(ParseRational(".5") == Rational(1, 2));
  CHECK(ParseRational("-0.25") == Rational(-1, 4));
}

TEST_CASE("ParseRational rejects malformed text") {
  CHECK_THROWS_AS(ParseRational(""), ValidationError);
  CHECK_THROWS_AS(ParseRational("1/0"), ValidationError);
  CHECK_THROWS_AS(ParseRational("abc"), ValidationError);
  CHECK_THROWS_AS(ParseRational("1.2.3"), ValidationError);
}

TEST_CASE("ToString and ToDecimal render exactly") {
  CHECK(ToString(Rational(7, 2)) == "7/2");
  CHECK(ToString(Rational(4)) == "4");
  CHECK(ToDecimal(Rational(7, 2)) == "3.5");
  CHECK(ToDecimal(Rational(1, 3)) == "0.333333");
  CHECK(ToDecimal(Rational(2, 3)) == "0.666667");
  CHECK(ToDecimal(Rational(-2, 3)) == "-0.666667");
  CHECK(ToDecimal(Rational(5)) == "5");
}

TEST_CASE("primitive directions keep sign and divide out the gcd") {
  RationalVector v{Rational(1, 2), Rational(-3, 4), 0};
  IntegerVector z = PrimitiveIntegerDirection(v);
  CHECK(z == IntegerVector{2, -3, 0});
  IntegerVector w{4, 6, -8};
  MakePrimitive(w);
  CHECK(w == IntegerVector{2, 3, -4});
}

}  // namespace
}  // namespace ddab
