// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "cbgt/errors.hpp"

namespace cbgt {

/// Arbitrary-precision integer.
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always normalized to lowest terms with a positive
/// denominator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline BigInt denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  return Rational(num, den);
}

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return make_rational(BigInt(num), BigInt(den));
}

/// Largest integer <= q.
inline BigInt floor(const Rational& q) {
  BigInt n = numerator(q);
  BigInt d = denominator(q);
  BigInt quo = n / d;  // truncates toward zero
  if (n < 0 && quo * d != n) --quo;
  return quo;
}

/// Smallest integer >= q.
inline BigInt ceil(const Rational& q) {
  BigInt f = floor(q);
  return (Rational(f) == q) ? f : f + 1;
}

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw BudgetError("integer does not fit in 64 bits: " + v.str());
  }
  return v.convert_to<std::int64_t>();
}

inline BigInt gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return (a / gcd(a, b)) * b;
}

/// "num/den", or just "num" when the denominator is one.
inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p", "p/q" or a terminating decimal such as "0.25".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> BigInt {
    if (s.empty()) throw DomainError("malformed rational: '" + std::string(text) + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw DomainError("malformed rational: '" + std::string(text) + "'");
    for (std::size_t j = i; j < s.size(); ++j) {
      if (s[j] < '0' || s[j] > '9') {
        throw DomainError("malformed rational: '" + std::string(text) + "'");
      }
    }
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return make_rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    BigInt w = (whole.empty() || whole == "-" || whole == "+") ? BigInt(0) : parse_int(whole);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    if (!frac.empty() && (frac[0] == '-' || frac[0] == '+')) {
      throw DomainError("malformed rational: '" + std::string(text) + "'");
    }
    Rational mag = Rational(w < 0 ? BigInt(-w) : w) + make_rational(f, scale);
    return negative ? Rational(-mag) : mag;
  }
  return Rational(parse_int(text));
}

}  // namespace cbgt
