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

#include <algorithm>
#include <cctype>
#include <sstream>

#include "ddab/error.h"

namespace ddab {
namespace {

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  const std::string original(text);
  if (s.empty()) throw ValidationError("empty rational literal");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!AllDigits(num) || !AllDigits(den)) {
      throw ValidationError("malformed rational '" + original + "'");
    }
    Integer d{std::string(den)};
    if (d == 0) throw ValidationError("zero denominator in '" + original + "'");
    value = Rational(Integer(std::string(num)), d);
    value.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) ||
        (!whole.empty() && !AllDigits(whole)) ||
        (!frac.empty() && !AllDigits(frac))) {
      throw ValidationError("malformed decimal '" + original + "'");
    }
    Integer w = whole.empty() ? Integer(0) : Integer(std::string(whole));
    Integer f = frac.empty() ? Integer(0) : Integer(std::string(frac));
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    value = Rational(w * scale + f, scale);
    value.canonicalize();
  } else {
    if (!AllDigits(s)) throw ValidationError("malformed rational '" + original + "'");
    value = Rational(Integer(std::string(s)));
  }
  return negative ? Rational(-value) : value;
}

std::string ToString(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string ToDecimal(const Rational& r, int digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(r) * scale;
  Integer q = scaled.get_num() / scaled.get_den();
  Rational rem = scaled - Rational(q);
  if (rem * 2 >= 1) q += 1;
  std::string digits_str = q.get_str();
  if (static_cast<int>(digits_str.size()) <= digits) {
    digits_str.insert(0, digits + 1 - digits_str.size(), '0');
  }
  std::string out = digits_str.substr(0, digits_str.size() - digits);
  std::string frac = digits_str.substr(digits_str.size() - digits);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  if (r < 0 && out != "0") out.insert(0, "-");
  return out;
}

std::string ToString(const RationalVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << ToString(v[i]);
  }
  os << ')';
  return os.str();
}

Rational Fraction(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Rational Sum(const RationalVector& v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

Rational Dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool LexLess(const RationalVector& a, const RationalVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void MakePrimitive(IntegerVector& v) {
  Integer g = 0;
  for (const auto& x : v) {
    if (x != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  }
  if (g == 0 || g == 1) return;
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

IntegerVector PrimitiveIntegerDirection(const RationalVector& v) {
  Integer l = 1;
  for (const auto& x : v) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  IntegerVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x.get_num() * (l / x.get_den()));
  MakePrimitive(out);
  return out;
}

}  // namespace ddab
