#include "rdv/fraction.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace rdv {

Fraction::Fraction(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("fraction: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Fraction::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Fraction Fraction::parse(std::string_view text) {
  auto parse_int = [](std::string_view s) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw std::invalid_argument("fraction: bad integer '" + std::string(s) + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Fraction(parse_int(text), 1);
  return Fraction(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

}  // namespace rdv
