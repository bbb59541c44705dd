#pragma once

#include <cmath>
#include <limits>

namespace wishartsum {

/// Sign-and-log representation of a real number. Keeps products of gamma
/// factors, sigma powers, and determinants finite far past double range.
struct LogValue {
  int sign = 0;  // -1, 0, +1
  double log_abs = -std::numeric_limits<double>::infinity();

  static LogValue zero() { return LogValue{}; }

  static LogValue one() { return LogValue{1, 0.0}; }

  static LogValue from_double(double v) {
    if (v == 0.0) return zero();
    return LogValue{v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
  }

  static LogValue from_log(int sign, double log_abs) {
    if (sign == 0) return zero();
    return LogValue{sign, log_abs};
  }

  /// exp(log_abs) with sign; overflows to +-inf, underflows to 0.
  double to_double() const {
    if (sign == 0) return 0.0;
    return static_cast<double>(sign) * std::exp(log_abs);
  }

  bool is_zero() const { return sign == 0; }

  LogValue operator*(const LogValue& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return LogValue{sign * o.sign, log_abs + o.log_abs};
  }

  LogValue operator/(const LogValue& o) const {
    // division by zero propagates as +inf log magnitude
    if (sign == 0) return zero();
    return LogValue{sign * o.sign, log_abs - o.log_abs};
  }

  LogValue operator-() const { return LogValue{-sign, log_abs}; }
};

/// value^k for integer k (k may be negative; value must be nonzero then).
inline LogValue pow(const LogValue& v, long k) {
  if (k == 0) return LogValue::one();
  if (v.sign == 0) return LogValue::zero();
  int s = (v.sign < 0 && (k & 1L)) ? -1 : 1;
  return LogValue{s, v.log_abs * static_cast<double>(k)};
}

}  // namespace wishartsum
