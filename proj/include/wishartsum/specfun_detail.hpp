#pragma once

// Series kernels shared by the public double API and the double-double
// instantiation that feeds the density determinants.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "wishartsum/ddouble.hpp"
#include "wishartsum/errors.hpp"

namespace wishartsum {

inline double pow_real(double x, double p) { return std::pow(x, p); }

namespace specfun_detail {

constexpr int kSeriesCap = 10000;

template <class Real>
struct series_traits;

template <>
struct series_traits<double> {
  static constexpr double tail_tol = 1e-17;
};

template <>
struct series_traits<DoubleDouble> {
  static constexpr double tail_tol = 1e-33;
};

inline double mag(double x) { return std::fabs(x); }
inline double mag(const DoubleDouble& x) { return std::fabs(x.hi); }

inline double as_double(double x) { return x; }
inline double as_double(const DoubleDouble& x) { return x.to_double(); }

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

[[noreturn]] inline void series_failure(const char* fn, double a, double b, double c, double z) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%s: series did not converge within %d terms (a=%g b=%g c=%g z=%g)", fn,
                kSeriesCap, a, b, c, z);
  throw numerical_error(buf);
}

inline double ldexp_r(double x, int k) { return std::ldexp(x, k); }
inline DoubleDouble ldexp_r(DoubleDouble x, int k) { return ldexp(x, k); }

/// Neumaier-compensated accumulator.
template <class Real>
class CompensatedSum {
 public:
  explicit CompensatedSum(Real init) : sum_(init), comp_(0.0) {}

  void add(Real t) {
    Real s = sum_ + t;
    if (mag(sum_) > mag(t)) {
      comp_ += (sum_ - s) + t;
    } else {
      comp_ += (t - s) + sum_;
    }
    sum_ = s;
  }

  void rescale(int k) {
    sum_ = ldexp_r(sum_, k);
    comp_ = ldexp_r(comp_, k);
  }

  Real value() const { return sum_ + comp_; }

 private:
  Real sum_;
  Real comp_;
};

/// (a)_k / (b)_k as a running product; avoids large intermediates.
template <class Real>
Real pochhammer_ratio(double a, double b, int k) {
  Real r(1.0);
  for (int i = 0; i < k; ++i) {
    r *= Real(a + i) / Real(b + i);
  }
  return r;
}

/// Series value as mantissa * 2^exp2; the mantissa is rescaled whenever the
/// running sum approaches double range, so e^{|z|}-sized sums stay finite.
template <class Real>
struct ScaledReal {
  Real mantissa;
  long exp2 = 0;
};

/// Direct Taylor sum of 1F1(a;b;z). Stable for z >= 0 (all terms positive
/// once k exceeds -a); terminates exactly when a is a nonpositive integer.
/// The 1F1 term ratio is unimodal in k, so once it decreases and drops
/// below 1/2 the geometric tail bound is valid.
template <class Real>
ScaledReal<Real> hyp1f1_series_scaled(double a, double b, Real z) {
  constexpr double tol = series_traits<Real>::tail_tol;
  constexpr int kRescaleShift = 600;
  const double rescale_limit = std::ldexp(1.0, kRescaleShift);
  Real term(1.0);
  CompensatedSum<Real> sum(term);
  long exp2 = 0;
  for (int k = 0; k < kSeriesCap; ++k) {
    Real ratio = (Real(a + k) * z) / (Real(b + k) * Real(double(k) + 1.0));
    term *= ratio;
    if (mag(term) == 0.0) return {sum.value(), exp2};
    if (!std::isfinite(mag(term))) series_failure("hyp1f1", a, b, 0.0, as_double(z));
    sum.add(term);
    double rho = mag(ratio);
    double rho_next = rho * std::fabs((a + k + 1) * (b + k) * (k + 1) /
                                      ((a + k) * (b + k + 1) * (k + 2)));
    if (rho_next <= rho && rho_next < 0.5 &&
        mag(term) * rho_next / (1.0 - rho_next) < tol * mag(sum.value())) {
      return {sum.value(), exp2};
    }
    if (mag(term) > rescale_limit || mag(sum.value()) > rescale_limit) {
      term = ldexp_r(term, -kRescaleShift);
      sum.rescale(-kRescaleShift);
      exp2 += kRescaleShift;
    }
  }
  series_failure("hyp1f1", a, b, 0.0, as_double(z));
}

template <class Real>
Real hyp1f1_series(double a, double b, Real z) {
  ScaledReal<Real> s = hyp1f1_series_scaled(a, b, z);
  return ldexp_r(s.mantissa, int(std::min<long>(s.exp2, 3000)));  // may overflow to inf
}

/// 1F1 with the Kummer transformation applied for z < 0, so the series is
/// summed with nonnegative argument. When the transformed series exceeds
/// double range the product e^z * S is composed in log space.
template <class Real>
Real hyp1f1_any(double a, double b, Real z) {
  using std::exp;  // ADL picks the DoubleDouble overloads
  using std::log;
  static const Real kLn2 = Real(6.931471805599452862e-01) + Real(2.319046813846299558e-17);
  if (mag(z) == 0.0) return Real(1.0);
  if (as_double(z) < 0.0) {
    ScaledReal<Real> s = hyp1f1_series_scaled(b - a, b, -z);
    if (s.exp2 == 0) return exp(z) * s.mantissa;
    double sign = as_double(s.mantissa) < 0.0 ? -1.0 : 1.0;
    Real l = z + log(sign * s.mantissa) + Real(double(s.exp2)) * kLn2;
    return Real(sign) * exp(l);
  }
  ScaledReal<Real> s = hyp1f1_series_scaled(a, b, z);
  return ldexp_r(s.mantissa, int(std::min<long>(s.exp2, 3000)));
}

/// Gauss series for |z| < 1; terminates exactly for nonpositive-integer a
/// or b. Future term ratios are bounded by max(next ratio, |z|) since the
/// parameter factor tends to 1 monotonically.
template <class Real>
Real hyp2f1_series(double a, double b, double c, Real z) {
  constexpr double tol = series_traits<Real>::tail_tol;
  Real term(1.0);
  CompensatedSum<Real> sum(term);
  for (int k = 0; k < kSeriesCap; ++k) {
    Real ratio = (Real(a + k) * Real(b + k) * z) / (Real(c + k) * Real(double(k) + 1.0));
    term *= ratio;
    if (mag(term) == 0.0) return sum.value();
    if (!std::isfinite(mag(term))) series_failure("hyp2f1", a, b, c, as_double(z));
    sum.add(term);
    double rho_next = mag(z) * std::fabs((a + k + 1) * (b + k + 1) /
                                         ((c + k + 1) * (k + 2)));
    double rho_max = std::max(rho_next, mag(z));
    if (rho_max < 1.0 &&
        mag(term) * rho_max / (1.0 - rho_max) < tol * mag(sum.value())) {
      return sum.value();
    }
  }
  series_failure("hyp2f1", a, b, c, as_double(z));
}

/// 2F1 on z < 1. Negative arguments go through the Pfaff transformation
/// w = z/(z-1); of the two symmetric Pfaff forms, prefer one whose
/// transformed numerator parameters are both positive (all-positive series,
/// no cancellation), then a terminating form, then the generic one.
template <class Real>
Real hyp2f1_any(double a, double b, double c, Real z) {
  if (mag(z) == 0.0) return Real(1.0);
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    return hyp2f1_series(a, b, c, z);  // polynomial, any z
  }
  double zd = as_double(z);
  if (zd > 0.0) {
    return hyp2f1_series(a, b, c, z);
  }
  Real w = z / (z - Real(1.0));
  Real one_minus_z = Real(1.0) - z;
  bool keep_b_positive = (c - a > 0.0) && (b > 0.0);
  bool keep_a_positive = (a > 0.0) && (c - b > 0.0);
  if (keep_b_positive) {
    return pow_real(one_minus_z, -b) * hyp2f1_series(c - a, b, c, w);
  }
  if (keep_a_positive) {
    return pow_real(one_minus_z, -a) * hyp2f1_series(a, c - b, c, w);
  }
  if (is_nonpositive_integer(c - a)) {
    return pow_real(one_minus_z, -b) * hyp2f1_series(c - a, b, c, w);
  }
  return pow_real(one_minus_z, -a) * hyp2f1_series(a, c - b, c, w);
}

}  // namespace specfun_detail
}  // namespace wishartsum
