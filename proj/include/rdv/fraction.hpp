#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace rdv {

/// Exact rational with reduced representation and positive denominator.
/// Duty cycles and diversity rates are fractions by contract, never floats.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction() = default;
  Fraction(long long n, long long d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  /// Parses "a/b" or a bare integer "a".
  static Fraction parse(std::string_view text);

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator<=(const Fraction& a, const Fraction& b) {
    return a.num * b.den <= b.num * a.den;
  }
};

}  // namespace rdv
