#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>

namespace wishartsum {

/// Unevaluated sum of two doubles giving ~31 significant decimal digits.
/// The determinants of the density formulas are quasi-Vandermonde and
/// amplify entry rounding by ~1e10 at the n = 9 scale; double-double
/// arithmetic keeps the evaluated densities accurate to ~1e-15.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
  explicit operator double() const { return to_double(); }
};

namespace ddetail {

inline DoubleDouble quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace ddetail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = ddetail::two_sum(a.hi, b.hi);
  DoubleDouble t = ddetail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = ddetail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return ddetail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = ddetail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return ddetail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  double q1 = a.hi / b.hi;
  DoubleDouble r = a - DoubleDouble(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - DoubleDouble(q2) * b;
  double q3 = r.hi / b.hi;
  DoubleDouble q = ddetail::quick_two_sum(q1, q2);
  q.lo += q3;
  return ddetail::quick_two_sum(q.hi, q.lo);
}

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, DoubleDouble b) { return a = a / b; }

inline bool operator<(DoubleDouble a, DoubleDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }
inline bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi == b.hi && a.lo == b.lo; }

inline DoubleDouble fabs(DoubleDouble a) { return a.hi < 0.0 ? -a : a; }

inline DoubleDouble ldexp(DoubleDouble a, int k) {
  return {std::ldexp(a.hi, k), std::ldexp(a.lo, k)};
}

/// exp via 2^k * e^r reduction; Taylor on |r| <= ln(2)/2.
inline DoubleDouble exp(DoubleDouble x) {
  if (x.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
  if (x.hi < -745.0) return {0.0, 0.0};
  static const DoubleDouble kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};
  int k = static_cast<int>(std::lround(x.hi / kLn2.hi));
  DoubleDouble r = x - DoubleDouble(static_cast<double>(k)) * kLn2;
  DoubleDouble sum{1.0};
  DoubleDouble term{1.0};
  for (int i = 1; i <= 28; ++i) {
    term = term * r / DoubleDouble(static_cast<double>(i));
    sum += term;
    if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
  }
  return ldexp(sum, k);
}

/// x^k by binary exponentiation, integer k (negative allowed for x != 0).
inline DoubleDouble pow_int(DoubleDouble x, long k) {
  if (k < 0) return DoubleDouble(1.0) / pow_int(x, -k);
  DoubleDouble r{1.0};
  DoubleDouble base = x;
  while (k > 0) {
    if (k & 1L) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

/// log for x > 0; one Newton step from the double seed gives full dd accuracy.
inline DoubleDouble log(DoubleDouble x) {
  double l0 = std::log(x.hi);
  DoubleDouble e = exp(DoubleDouble(l0));
  return DoubleDouble(l0) + (x - e) / e;
}

/// x^p for x > 0 and real p (exact binary exponentiation when p is integral).
inline DoubleDouble pow_real(DoubleDouble x, double p) {
  if (p == std::floor(p) && std::fabs(p) < 1e9) {
    return pow_int(x, static_cast<long>(p));
  }
  return exp(DoubleDouble(p) * log(x));
}

}  // namespace wishartsum
