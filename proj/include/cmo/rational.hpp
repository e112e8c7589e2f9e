#pragma once

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>

#include "cmo/numerics.hpp"

namespace cmo {

// Exact rational arithmetic for the power-case admissibility relations;
// normalized, denominator positive.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw DomainError("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  // Accepts "3/2", "-1/4", "1.6", "2"; decimals are exact.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw GrammarError("Rational: empty value");
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      return Rational(std::stoll(s.substr(0, slash)),
                      std::stoll(s.substr(slash + 1)));
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    const std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (frac.size() > 15) throw GrammarError("Rational: too many decimal digits");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool neg = !whole.empty() && whole[0] == '-';
    const std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    std::int64_t n = (neg ? -w : w) * den + f;
    return Rational(neg ? -n : n, den);
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    std::ostringstream os;
    os << num;
    if (den != 1) os << '/' << den;
    return os.str();
  }

  friend Rational operator+(Rational a, Rational b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(Rational a, Rational b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw DomainError("Rational: division by zero");
    return Rational(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a == b || a < b;
  }
};

}  // namespace cmo
