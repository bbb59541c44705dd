#pragma once

// Exact eigenvalue statistics of H = AA^H + BB^H: joint density, its
// normalization, the n+1-determinant marginal density with degenerate
// (derivative-column) variants, the equal-covariance Laguerre reference,
// and the quadrature self-checks.

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "wishartsum/ensemble.hpp"
#include "wishartsum/log_value.hpp"

namespace wishartsum {

struct DensityCurve {
  std::vector<double> grid;    // strictly increasing, nonnegative
  std::vector<double> values;  // density per unit eigenvalue
};

/// Joint density of the n = 2 case sampled on a rectangular grid,
/// values row-major over (axis1, axis2).
struct JointDensityGrid {
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<double> values;
};

namespace analytic {

/// Truncation point: smallest lambda whose gamma-tail envelope
/// Q(m+n, lambda * r) drops below 1e-12, r the slowest decay rate.
double lambda_max(const EnsembleParams& params);

/// log C of the joint density; the degeneracy profile selects derivative
/// columns for repeated sigma_B values. The overload without a profile
/// clusters at the default tolerance.
LogValue joint_log_norm(const EnsembleParams& params);
LogValue joint_log_norm(const EnsembleParams& params, const DegeneracyProfile& profile);

/// Joint eigenvalue density at the given point (all lambdas positive).
double joint_pdf(const EnsembleParams& params, const std::vector<double>& lambdas);
double joint_pdf(const EnsembleParams& params, const DegeneracyProfile& profile,
                 const std::vector<double>& lambdas);

/// Marginal density by the bordered (n+1)-determinant; requires
/// well-separated sigma_B (throws conditioning_error otherwise).
double marginal_pdf(const EnsembleParams& params, double lambda);

/// Marginal density with per-cluster derivative columns.
double marginal_pdf_degenerate(const EnsembleParams& params, const DegeneracyProfile& profile,
                               double lambda);

/// Marginal of the complex Wishart W_n(dof, sigma I) via the classical
/// Laguerre Christoffel-Darboux sum; independent of the determinant path.
double lue_marginal_reference(int n, int dof, double sigma, double lambda);

/// Integral of f over [0, inf), truncated at lambda_max(params); absolute
/// tolerance 1e-8.
double integrate_density(const EnsembleParams& params, const std::function<double(double)>& f);

/// Marginal density over a grid; dispatches to the degenerate branch when
/// sigma_B values cluster. Grid points at exactly 0 get the limit value 0.
DensityCurve marginal_curve(const EnsembleParams& params, const std::vector<double>& grid);

/// First moment of the marginal by quadrature; equals
/// (n_A n sigma_A + n_B sum sigma_Bk) / n up to quadrature error.
double mean_eigenvalue(const EnsembleParams& params);

/// Joint density of an n = 2 ensemble over grid x grid.
JointDensityGrid joint_grid(const EnsembleParams& params, const std::vector<double>& grid);

/// CSV serialization, 17 significant digits.
void write_csv(const DensityCurve& curve, std::ostream& os);
void write_csv(const JointDensityGrid& grid, std::ostream& os);

/// Precomputes the lambda-independent h-determinant so curve evaluation
/// costs one bordered determinant per point.
class MarginalEvaluator {
 public:
  MarginalEvaluator(const EnsembleParams& params, const DegeneracyProfile& profile);
  double operator()(double lambda) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Caches the normalization constant so repeated joint-density evaluation
/// (grids, quadrature) costs one n x n determinant per point.
class JointEvaluator {
 public:
  JointEvaluator(const EnsembleParams& params, const DegeneracyProfile& profile);
  double operator()(const std::vector<double>& lambdas) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace analytic
}  // namespace wishartsum
