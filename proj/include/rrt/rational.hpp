#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rrt {

// Exact rational arithmetic on int64 numerator/denominator, enough for the
// enumeration oracles (denominators up to (n-1)! * b^n at the caps).
// Intermediate products go through 128 bits and overflow throws.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rational from_128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rational: value exceeds 64 bits");
    Rational r;
    r.num = std::int64_t(n);
    r.den = std::int64_t(d);
    return r;
  }

  Rational operator+(const Rational& o) const {
    return from_128(__int128(num) * o.den + __int128(o.num) * den,
                    __int128(den) * o.den);
  }
  Rational operator-(const Rational& o) const {
    return from_128(__int128(num) * o.den - __int128(o.num) * den,
                    __int128(den) * o.den);
  }
  Rational operator*(const Rational& o) const {
    return from_128(__int128(num) * o.num, __int128(den) * o.den);
  }
  Rational operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("Rational: division by zero");
    return from_128(__int128(num) * o.den, __int128(den) * o.num);
  }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }

  double to_double() const { return double(num) / double(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

  // Best rational approximation with bounded denominator (continued
  // fractions); exact for inputs that are such fractions.
  static Rational from_double(double x, std::int64_t max_den = 100000);
};

inline Rational Rational::from_double(double x, std::int64_t max_den) {
  bool neg = x < 0;
  if (neg) x = -x;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    std::int64_t a = std::int64_t(v);
    std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = v - double(a);
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  return Rational(neg ? -p1 : p1, q1);
}

}  // namespace rrt
