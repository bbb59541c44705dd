#include "wishartsum/specfun.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "wishartsum/errors.hpp"
#include "wishartsum/specfun_detail.hpp"

namespace wishartsum::specfun {

using specfun_detail::CompensatedSum;
using specfun_detail::is_nonpositive_integer;

namespace {

[[noreturn]] void domain_failure(const char* fn, const char* what) {
  throw std::domain_error(std::string(fn) + ": " + what);
}

void check_hyp1f1_params(double b) {
  if (is_nonpositive_integer(b)) domain_failure("hyp1f1", "b is a nonpositive integer");
}

void check_hyp2f1_params(double c, double z) {
  if (is_nonpositive_integer(c)) domain_failure("hyp2f1", "c is a nonpositive integer");
  if (z >= 1.0) domain_failure("hyp2f1", "z >= 1 is outside the supported branch");
}

// Regularized lower incomplete gamma by power series, z < a + 1.
double gamma_p_series(double a, double z) {
  double ap = a;
  double del = 1.0 / a;
  CompensatedSum<double> sum(del);
  for (int i = 0; i < 2000; ++i) {
    ap += 1.0;
    del *= z / ap;
    sum.add(del);
    if (std::fabs(del) < std::fabs(sum.value()) * 1e-17) {
      return sum.value() * std::exp(-z + a * std::log(z) - std::lgamma(a));
    }
  }
  throw numerical_error("gamma_p: series did not converge");
}

// Regularized upper incomplete gamma by modified Lentz continued fraction,
// z >= a + 1.
double gamma_q_cf(double a, double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 2000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-17) {
      return h * std::exp(-z + a * std::log(z) - std::lgamma(a));
    }
  }
  throw numerical_error("gamma_q: continued fraction did not converge");
}

// Sum_{k=0}^{kmax-1} z^k / k! with compensation.
double exp_partial_sum(double z, int kmax) {
  double term = 1.0;
  CompensatedSum<double> sum(term);
  for (int k = 1; k < kmax; ++k) {
    term *= z / static_cast<double>(k);
    sum.add(term);
  }
  return sum.value();
}

}  // namespace

double ln_gamma(double a) {
  if (!(a > 0.0)) domain_failure("ln_gamma", "argument must be positive");
  return std::lgamma(a);
}

double pochhammer(double a, int k) {
  if (k < 0) throw std::invalid_argument("pochhammer: negative order");
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

double gamma_p(double a, double z) {
  if (!(a > 0.0)) domain_failure("gamma_p", "a must be positive");
  if (z < 0.0) domain_failure("gamma_p", "z must be nonnegative");
  if (z == 0.0) return 0.0;
  return (z < a + 1.0) ? gamma_p_series(a, z) : 1.0 - gamma_q_cf(a, z);
}

double gamma_q(double a, double z) {
  if (!(a > 0.0)) domain_failure("gamma_q", "a must be positive");
  if (z < 0.0) domain_failure("gamma_q", "z must be nonnegative");
  if (z == 0.0) return 1.0;
  return (z < a + 1.0) ? 1.0 - gamma_p_series(a, z) : gamma_q_cf(a, z);
}

double lower_incomplete_gamma(double a, double z) {
  if (!(a > 0.0)) domain_failure("lower_incomplete_gamma", "a must be positive");
  if (z == 0.0) return 0.0;
  if (z > 0.0) {
    return std::exp(std::lgamma(a)) * gamma_p(a, z);
  }
  // Analytic continuation: only entire in z when a is a positive integer.
  double ar = std::nearbyint(a);
  if (a != ar) {
    domain_failure("lower_incomplete_gamma",
                   "negative argument requires integer a (complex branch not supported)");
  }
  int ai = static_cast<int>(ar);
  if (std::fabs(z) <= 0.9 * (a + 1.0)) {
    // gamma(a,z) = (a-1)! e^{-z} sum_{k>=a} z^k/k!; geometric-decayed
    // alternating tail, avoids the 1 - e^{-z} S cancellation when the
    // partial sum S is close to e^z.
    double term = 1.0;
    for (int k = 1; k <= ai; ++k) term *= z / static_cast<double>(k);
    CompensatedSum<double> sum(term);
    for (int k = ai + 1; k < ai + 2000; ++k) {
      term *= z / static_cast<double>(k);
      sum.add(term);
      if (std::fabs(term) < 1e-17 * std::fabs(sum.value())) break;
    }
    return std::exp(std::lgamma(a)) * std::exp(-z) * sum.value();
  }
  double s = exp_partial_sum(z, ai);
  return std::exp(std::lgamma(a)) * (1.0 - std::exp(-z) * s);
}

double hyp1f1(double a, double b, double z) {
  check_hyp1f1_params(b);
  return specfun_detail::hyp1f1_any(a, b, z);
}

DoubleDouble hyp1f1_dd(double a, double b, DoubleDouble z) {
  check_hyp1f1_params(b);
  return specfun_detail::hyp1f1_any(a, b, z);
}

double hyp1f1_deriv(int k, double a, double b, double z) {
  if (k < 0) throw std::invalid_argument("hyp1f1_deriv: negative order");
  if (k == 0) return hyp1f1(a, b, z);
  double pre = specfun_detail::pochhammer_ratio<double>(a, b, k);
  return pre * hyp1f1(a + k, b + k, z);
}

DoubleDouble hyp1f1_deriv_dd(int k, double a, double b, DoubleDouble z) {
  if (k < 0) throw std::invalid_argument("hyp1f1_deriv: negative order");
  if (k == 0) return hyp1f1_dd(a, b, z);
  DoubleDouble pre = specfun_detail::pochhammer_ratio<DoubleDouble>(a, b, k);
  return pre * hyp1f1_dd(a + k, b + k, z);
}

double hyp2f1(double a, double b, double c, double z) {
  check_hyp2f1_params(c, z);
  return specfun_detail::hyp2f1_any(a, b, c, z);
}

DoubleDouble hyp2f1_dd(double a, double b, double c, DoubleDouble z) {
  check_hyp2f1_params(c, z.to_double());
  return specfun_detail::hyp2f1_any(a, b, c, z);
}

double hyp2f1_deriv(int k, double a, double b, double c, double z) {
  if (k < 0) throw std::invalid_argument("hyp2f1_deriv: negative order");
  if (k == 0) return hyp2f1(a, b, c, z);
  double pre = specfun_detail::pochhammer_ratio<double>(a, c, k) * pochhammer(b, k);
  return pre * hyp2f1(a + k, b + k, c + k, z);
}

DoubleDouble hyp2f1_deriv_dd(int k, double a, double b, double c, DoubleDouble z) {
  if (k < 0) throw std::invalid_argument("hyp2f1_deriv: negative order");
  if (k == 0) return hyp2f1_dd(a, b, c, z);
  DoubleDouble pre = specfun_detail::pochhammer_ratio<DoubleDouble>(a, c, k);
  for (int i = 0; i < k; ++i) pre *= DoubleDouble(b + i);
  return pre * hyp2f1_dd(a + k, b + k, c + k, z);
}

double hyp1f1_elementary(int alpha, int n_a, double z) {
  if (alpha < 1 || n_a < 1) {
    throw std::invalid_argument("hyp1f1_elementary: alpha and n_a must be positive integers");
  }
  if (z == 0.0) domain_failure("hyp1f1_elementary", "z must be nonzero (limit value is 1)");
  double ln_beta = std::lgamma(static_cast<double>(alpha)) +
                   std::lgamma(static_cast<double>(n_a)) -
                   std::lgamma(static_cast<double>(alpha + n_a));
  double binom = 1.0;
  CompensatedSum<double> sum(binom * lower_incomplete_gamma(alpha, -z));
  double zpow = 1.0;
  for (int k = 1; k <= n_a - 1; ++k) {
    binom *= static_cast<double>(n_a - k) / static_cast<double>(k);
    zpow /= z;
    sum.add(zpow * binom * lower_incomplete_gamma(alpha + k, -z));
  }
  // (-z)^{-alpha}: real for integer alpha, sign (-1)^alpha when z > 0
  double sign = (z < 0.0 || alpha % 2 == 0) ? 1.0 : -1.0;
  double scale = sign * std::exp(-alpha * std::log(std::fabs(z)) - ln_beta);
  return scale * sum.value();
}

}  // namespace wishartsum::specfun
