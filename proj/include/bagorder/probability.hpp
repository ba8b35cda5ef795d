// Copyright 2026 The bagorder Authors.
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

// Exact probabilities.
//
// Every probability the models produce is a quotient of table counts, so it
// is held as an exact Ratio. Sentence scores are products of such ratios and
// are kept as an exact (unreduced) rational in LogScore. Two arrangements
// compare equal only if their probabilities are mathematically equal, which
// makes tie-breaking identical across the DP search, the brute-force oracle
// and the M2/AM2 pair regardless of the order factors were applied in.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

#include "bagorder/error.hpp"

namespace bagorder {

/// Non-negative rational num/den with den > 0.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static constexpr Ratio zero() { return {0, 1}; }
  static constexpr Ratio one() { return {1, 1}; }

  bool is_zero() const noexcept { return num == 0; }
  double to_double() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  /// Parses a plain decimal such as "0", "1e-9", "0.25" or "2.5E-3".
  /// The resulting denominator is a power of ten no larger than 10^18.
  static Ratio from_decimal(std::string_view text);

  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    using u128 = unsigned __int128;
    const u128 lhs = static_cast<u128>(a.num) * b.den;
    const u128 rhs = static_cast<u128>(b.num) * a.den;
    return lhs <=> rhs;
  }
  friend bool operator==(const Ratio& a, const Ratio& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
};

inline Ratio Ratio::from_decimal(std::string_view text) {
  const auto bad = [&] {
    return ConfigError("not a decimal probability: '" + std::string(text) + "'");
  };
  if (text.empty()) throw bad();
  std::size_t i = 0;
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      digits += c;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw bad();
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw bad();
    ++i;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      negative = text[i] == '-';
      ++i;
    }
    if (i == text.size()) throw bad();
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') throw bad();
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 100) throw bad();
    }
    if (negative) exponent = -exponent;
  }
  // Strip leading zeros so the mantissa fits in 64 bits when it can.
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  int scale = frac_digits - exponent;
  while (scale < 0) {
    digits += '0';
    ++scale;
  }
  // Drop trailing fractional zeros.
  while (scale > 0 && digits.size() > 1 && digits.back() == '0') {
    digits.pop_back();
    --scale;
  }
  if (digits.size() > 19 || scale > 18) throw bad();
  Ratio r{std::stoull(digits), 1};
  for (int k = 0; k < scale; ++k) r.den *= 10;
  if (r.num == 0) r.den = 1;
  return r;
}

/// Probability of a (partial) arrangement, stored exactly.
///
/// The zero element absorbs every product and compares below all positive
/// scores. value() is the natural log of the reduced rational and is
/// therefore independent of the order in which factors were applied.
class LogScore {
 public:
  using Int = boost::multiprecision::cpp_int;

  LogScore() = default;

  static LogScore one() { return LogScore(); }
  static LogScore zero() {
    LogScore s;
    s.num_ = 0;
    return s;
  }

  bool is_zero() const { return num_.is_zero(); }

  void multiply(const Ratio& r) {
    if (is_zero()) return;
    if (r.is_zero()) {
      *this = zero();
      return;
    }
    num_ *= r.num;
    den_ *= r.den;
  }

  /// Division by a zero probability yields zero.
  void divide(const Ratio& r) {
    if (is_zero()) return;
    if (r.is_zero()) {
      *this = zero();
      return;
    }
    num_ *= r.den;
    den_ *= r.num;
  }

  /// Natural log; -infinity for zero.
  double value() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    const Int g = boost::multiprecision::gcd(num_, den_);
    return log_of(num_ / g) - log_of(den_ / g);
  }

  /// Fixed 10-digit decimal of value(), or "-inf".
  std::string str() const {
    if (is_zero()) return "-inf";
    char buf[64];
    double v = value();
    if (v == 0.0) v = 0.0;  // no "-0.0000000000"
    std::snprintf(buf, sizeof buf, "%.10f", v);
    return buf;
  }

  const Int& numerator() const noexcept { return num_; }
  const Int& denominator() const noexcept { return den_; }

  friend std::strong_ordering operator<=>(const LogScore& a,
                                          const LogScore& b) {
    const Int lhs = a.num_ * b.den_;
    const Int rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (rhs < lhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const LogScore& a, const LogScore& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  static double log_of(const Int& x) {
    const auto bits = boost::multiprecision::msb(x);
    if (bits < 62) return std::log(x.convert_to<double>());
    const auto shift = bits - 61;
    const Int top = x >> shift;
    return std::log(top.convert_to<double>()) +
           static_cast<double>(shift) * std::log(2.0);
  }

  Int num_{1};
  Int den_{1};
};

}  // namespace bagorder
