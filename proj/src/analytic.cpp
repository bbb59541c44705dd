#include "wishartsum/analytic.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wishartsum/errors.hpp"
#include "wishartsum/linalg.hpp"
#include "wishartsum/quadrature.hpp"
#include "wishartsum/specfun.hpp"

namespace wishartsum::analytic {

namespace {

// Equilibrated pivots below this ratio mean the sigma_B separation has been
// swallowed by the double-double noise floor (~1e-31 amplified past ~1e-7);
// the degenerate evaluator is the accurate route.
constexpr double kPivotTol = 1e-24;

// Rounding may push densities slightly negative; anything worse than this
// is a formula bug, not noise.
constexpr double kDensityFloor = -1e-13;

// Flattened (cluster value, derivative order) pairs, one per determinant
// column (or row, for the joint density).
struct ColumnScheme {
  std::vector<double> value;
  std::vector<int> deriv;
};

ColumnScheme scheme_from_profile(const DegeneracyProfile& profile) {
  ColumnScheme s;
  for (const auto& c : profile.clusters) {
    for (int i = 0; i < c.multiplicity; ++i) {
      s.value.push_back(c.value);
      s.deriv.push_back(i);
    }
  }
  return s;
}

void check_profile(const EnsembleParams& params, const DegeneracyProfile& profile) {
  if (profile.total_multiplicity() != params.n) {
    std::ostringstream os;
    os << "degeneracy profile covers " << profile.total_multiplicity()
       << " values but n = " << params.n;
    throw std::invalid_argument(os.str());
  }
  for (const auto& c : profile.clusters) {
    if (!(c.value > 0.0) || c.multiplicity < 1) {
      throw std::invalid_argument("degeneracy profile has a nonpositive value or multiplicity");
    }
  }
}

DoubleDouble dd_factorial(int k) {
  DoubleDouble r{1.0};
  for (int i = 2; i <= k; ++i) r *= DoubleDouble(double(i));
  return r;
}

// lambda^{j-1} / Gamma(m+j) as a double-double entry; falls back to a
// log-composed double beyond the factorial range.
DoubleDouble g_entry(double lambda, int j, int m) {
  if (m + j - 1 <= 170) {
    return pow_int(DoubleDouble(lambda), j - 1) / dd_factorial(m + j - 1);
  }
  return exp(DoubleDouble((j - 1) * std::log(lambda) - std::lgamma(double(m + j))));
}

// z_c = 1 - sigma_A / sigma_Bc, exact inputs.
DoubleDouble z_of(double sigma_a, double value) {
  return DoubleDouble(1.0) - DoubleDouble(sigma_a) / DoubleDouble(value);
}

// x_c = 1/sigma_A - 1/sigma_Bc.
DoubleDouble x_of(double sigma_a, double value) {
  return DoubleDouble(1.0) / DoubleDouble(sigma_a) - DoubleDouble(1.0) / DoubleDouble(value);
}

// The h block of the bordered determinant: h(j, col) with the per-cluster
// derivative columns sigma_A^{m+j+i} 2F1^{(i)}(alpha; m+j; gamma; z_c).
linalg::DDMatrix build_h(const EnsembleParams& params, const ColumnScheme& scheme) {
  const int n = params.n;
  const int m = params.m();
  const double al = params.alpha();
  const double ga = params.gamma();
  linalg::DDMatrix h(n, n);
  for (int col = 0; col < n; ++col) {
    DoubleDouble z = z_of(params.sigma_a, scheme.value[col]);
    int i = scheme.deriv[col];
    for (int j = 1; j <= n; ++j) {
      DoubleDouble f2 = specfun::hyp2f1_deriv_dd(i, al, double(m + j), ga, z);
      h(j - 1, col) = pow_int(DoubleDouble(params.sigma_a), m + j + i) * f2;
    }
  }
  return h;
}

double clamp_density(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v > kDensityFloor) return 0.0;
  std::ostringstream os;
  os << what << ": density " << v << " below the rounding floor";
  throw numerical_error(os.str());
}

struct JointContext {
  EnsembleParams params;
  ColumnScheme scheme;
  LogValue log_c;
};

JointContext make_joint_context(const EnsembleParams& params, const DegeneracyProfile& profile) {
  return JointContext{params, scheme_from_profile(profile), joint_log_norm(params, profile)};
}

double joint_pdf_ctx(const JointContext& ctx, const std::vector<double>& lambdas) {
  const EnsembleParams& params = ctx.params;
  const int n = params.n;
  if (lambdas.size() != static_cast<size_t>(n)) {
    throw std::invalid_argument("joint_pdf: expected exactly n eigenvalues");
  }
  for (double l : lambdas) {
    if (!(l > 0.0)) throw std::domain_error("joint_pdf: eigenvalues must be positive");
  }

  // Vandermonde; permutation sign cancels against the determinant's
  // column-swap sign, so any argument order gives the same density.
  int vdm_sign = 1;
  double vdm_log = 0.0;
  for (int j = 1; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      double d = lambdas[j] - lambdas[k];
      if (d == 0.0) return 0.0;
      if (d < 0.0) {
        vdm_sign = -vdm_sign;
        d = -d;
      }
      vdm_log += std::log(d);
    }
  }

  const int m = params.m();
  const double al = params.alpha();
  const double ga = params.gamma();
  linalg::DDMatrix d(n, n);
  for (int row = 0; row < n; ++row) {
    DoubleDouble x = x_of(params.sigma_a, ctx.scheme.value[row]);
    int i = ctx.scheme.deriv[row];
    for (int k = 0; k < n; ++k) {
      DoubleDouble arg = x * DoubleDouble(lambdas[k]);
      d(row, k) = pow_int(DoubleDouble(lambdas[k]), i) * specfun::hyp1f1_deriv_dd(i, al, ga, arg);
    }
  }
  LogValue det = linalg::log_det(std::move(d)).value;

  double weight_log = 0.0;
  for (double l : lambdas) {
    weight_log += m * std::log(l) - l / params.sigma_a;
  }

  LogValue result = ctx.log_c * LogValue::from_log(vdm_sign, vdm_log) *
                    LogValue::from_log(1, weight_log) * det;
  return clamp_density(result.to_double(), "joint_pdf");
}

}  // namespace

double lambda_max(const EnsembleParams& params) {
  double slowest = params.sigma_a;
  for (double s : params.sigma_b) slowest = std::max(slowest, s);
  const double r = 1.0 / slowest;
  const double a = params.m() + params.n;
  double hi = (a + 60.0 * std::sqrt(a) + 60.0) / r;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (specfun::gamma_q(a, mid * r) < 1e-12) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo < 1e-9 * hi) break;
  }
  return hi;
}

LogValue joint_log_norm(const EnsembleParams& params) {
  return joint_log_norm(params, ensemble::detect_clusters(params));
}

LogValue joint_log_norm(const EnsembleParams& params, const DegeneracyProfile& profile) {
  check_profile(params, profile);
  const ColumnScheme scheme = scheme_from_profile(profile);
  const int n = params.n;
  const int m = params.m();
  const double al = params.alpha();
  const double ga = params.gamma();

  linalg::DDMatrix e(n, n);
  for (int col = 0; col < n; ++col) {
    DoubleDouble z = z_of(params.sigma_a, scheme.value[col]);
    int i = scheme.deriv[col];
    for (int j = 1; j <= n; ++j) {
      e(j - 1, col) =
          pow_int(DoubleDouble(params.sigma_a), i) * specfun::hyp2f1_deriv_dd(i, al, double(m + j), ga, z);
    }
  }
  linalg::LogDet det = linalg::log_det(std::move(e));
  if (det.value.is_zero() || det.min_pivot_ratio < kPivotTol) {
    throw conditioning_error(
        "joint_log_norm: normalization determinant collapsed; sigma_B values are closer than "
        "the separation the non-degenerate formula can resolve (cluster them and use the "
        "degenerate branch)");
  }

  double log_gammas = 0.0;
  for (int l = 1; l <= n; ++l) log_gammas += std::lgamma(double(m + l));
  long sigma_exp = long(n) * m + long(n) * (n + 1) / 2;

  LogValue c_inv = LogValue::from_log(1, std::lgamma(double(n + 1))) *
                   pow(LogValue::from_double(params.sigma_a), sigma_exp) *
                   LogValue::from_log(1, log_gammas) * det.value;
  return LogValue::one() / c_inv;
}

double joint_pdf(const EnsembleParams& params, const std::vector<double>& lambdas) {
  return joint_pdf(params, ensemble::detect_clusters(params), lambdas);
}

double joint_pdf(const EnsembleParams& params, const DegeneracyProfile& profile,
                 const std::vector<double>& lambdas) {
  check_profile(params, profile);
  return joint_pdf_ctx(make_joint_context(params, profile), lambdas);
}

struct JointEvaluator::Impl {
  JointContext ctx;
};

JointEvaluator::JointEvaluator(const EnsembleParams& params, const DegeneracyProfile& profile) {
  check_profile(params, profile);
  impl_ = std::make_shared<Impl>(Impl{make_joint_context(params, profile)});
}

double JointEvaluator::operator()(const std::vector<double>& lambdas) const {
  return joint_pdf_ctx(impl_->ctx, lambdas);
}

struct MarginalEvaluator::Impl {
  EnsembleParams params;
  ColumnScheme scheme;
  linalg::DDMatrix h;
  LogValue denom;  // -n det(h); p = w * det(bordered) / denom

  Impl(const EnsembleParams& p, const DegeneracyProfile& profile)
      : params(p), scheme(scheme_from_profile(profile)), h(build_h(p, scheme)) {
    linalg::LogDet det_h = linalg::log_det(h);
    if (det_h.value.is_zero() || det_h.min_pivot_ratio < kPivotTol) {
      throw conditioning_error(
          "marginal_pdf: h-determinant collapsed; sigma_B values are closer than the "
          "non-degenerate formula can resolve (use the degenerate branch)");
    }
    denom = LogValue::from_double(-double(params.n)) * det_h.value;
  }

  double density(double lambda) const {
    const int n = params.n;
    const int m = params.m();
    const double al = params.alpha();
    const double ga = params.gamma();

    linalg::DDMatrix b(n + 1, n + 1);
    b(0, 0) = DoubleDouble(0.0);
    for (int col = 0; col < n; ++col) {
      DoubleDouble x = x_of(params.sigma_a, scheme.value[col]);
      int i = scheme.deriv[col];
      DoubleDouble arg = x * DoubleDouble(lambda);
      b(0, col + 1) =
          pow_int(DoubleDouble(lambda), i) * specfun::hyp1f1_deriv_dd(i, al, ga, arg);
    }
    for (int j = 1; j <= n; ++j) {
      b(j, 0) = g_entry(lambda, j, m);
      for (int col = 0; col < n; ++col) {
        b(j, col + 1) = h(j - 1, col);
      }
    }
    LogValue det_b = linalg::log_det(std::move(b)).value;
    double weight_log = m * std::log(lambda) - lambda / params.sigma_a;
    LogValue p = det_b / denom * LogValue::from_log(1, weight_log);
    return clamp_density(p.to_double(), "marginal_pdf");
  }
};

MarginalEvaluator::MarginalEvaluator(const EnsembleParams& params,
                                     const DegeneracyProfile& profile) {
  check_profile(params, profile);
  impl_ = std::make_shared<Impl>(params, profile);
}

double MarginalEvaluator::operator()(double lambda) const {
  if (!(lambda > 0.0)) throw std::domain_error("marginal_pdf: lambda must be positive");
  return impl_->density(lambda);
}

double marginal_pdf(const EnsembleParams& params, double lambda) {
  DegeneracyProfile profile = ensemble::detect_clusters(params);
  if (profile.is_degenerate()) {
    throw conditioning_error(
        "marginal_pdf: sigma_B values coincide within the clustering tolerance; "
        "use marginal_pdf_degenerate");
  }
  return MarginalEvaluator(params, profile)(lambda);
}

double marginal_pdf_degenerate(const EnsembleParams& params, const DegeneracyProfile& profile,
                               double lambda) {
  check_profile(params, profile);
  return MarginalEvaluator(params, profile)(lambda);
}

double lue_marginal_reference(int n, int dof, double sigma, double lambda) {
  if (n < 1) throw std::invalid_argument("lue_marginal_reference: n must be >= 1");
  if (dof < n) {
    throw std::invalid_argument("lue_marginal_reference: dof must be at least n");
  }
  if (!(sigma > 0.0)) throw std::domain_error("lue_marginal_reference: sigma must be positive");
  if (!(lambda > 0.0)) throw std::domain_error("lue_marginal_reference: lambda must be positive");

  const double a = dof - n;
  const double x = lambda / sigma;
  // sum_k k!/Gamma(k+a+1) x^a e^{-x} L_k^(a)(x)^2 via the three-term
  // Laguerre recurrence, each term scaled in log space.
  double total = 0.0;
  double lk_prev = 0.0;
  double lk = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) {
      double next = ((2.0 * k - 1.0 + a - x) * lk - (k - 1.0 + a) * lk_prev) / k;
      lk_prev = lk;
      lk = next;
    }
    double log_coeff = std::lgamma(k + 1.0) - std::lgamma(k + a + 1.0) + a * std::log(x) - x;
    if (lk != 0.0) {
      double t = std::exp(0.5 * log_coeff) * lk;
      total += t * t;
    }
  }
  return total / (n * sigma);
}

double integrate_density(const EnsembleParams& params, const std::function<double(double)>& f) {
  return quadrature::integrate_to_tolerance(f, 0.0, lambda_max(params), 1e-8);
}

DensityCurve marginal_curve(const EnsembleParams& params, const std::vector<double>& grid) {
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw std::invalid_argument("marginal_curve: grid must be nonnegative and increasing");
    }
  }
  DensityCurve curve;
  curve.grid = grid;
  if (grid.empty()) return curve;

  MarginalEvaluator eval(params, ensemble::detect_clusters(params));
  curve.values.reserve(grid.size());
  for (double l : grid) {
    curve.values.push_back(l == 0.0 ? 0.0 : eval(l));
  }
  return curve;
}

double mean_eigenvalue(const EnsembleParams& params) {
  MarginalEvaluator eval(params, ensemble::detect_clusters(params));
  return integrate_density(params, [&](double l) { return l == 0.0 ? 0.0 : l * eval(l); });
}

JointDensityGrid joint_grid(const EnsembleParams& params, const std::vector<double>& grid) {
  if (params.n != 2) throw std::invalid_argument("joint_grid requires n = 2");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw std::invalid_argument("joint_grid: grid must be nonnegative and increasing");
    }
  }
  JointEvaluator eval(params, ensemble::detect_clusters(params));
  JointDensityGrid out;
  out.axis1 = grid;
  out.axis2 = grid;
  out.values.resize(grid.size() * grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    for (size_t j = 0; j < grid.size(); ++j) {
      double v = 0.0;
      if (grid[i] > 0.0 && grid[j] > 0.0 && grid[i] != grid[j]) {
        v = eval({grid[i], grid[j]});
      }
      out.values[i * grid.size() + j] = v;
    }
  }
  return out;
}

void write_csv(const DensityCurve& curve, std::ostream& os) {
  os << "lambda,density\n";
  char buf[64];
  for (size_t i = 0; i < curve.grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", curve.grid[i], curve.values[i]);
    os << buf;
  }
}

void write_csv(const JointDensityGrid& grid, std::ostream& os) {
  os << "lambda1,lambda2,density\n";
  char buf[96];
  for (size_t i = 0; i < grid.axis1.size(); ++i) {
    for (size_t j = 0; j < grid.axis2.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid.axis1[i], grid.axis2[j],
                    grid.values[i * grid.axis2.size() + j]);
      os << buf;
    }
  }
}

}  // namespace wishartsum::analytic
