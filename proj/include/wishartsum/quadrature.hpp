#pragma once

#include <functional>

namespace wishartsum::quadrature {

/// Composite 32-point Gauss-Legendre rule over equal panels on [a, b].
double panel_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                            int panels);

/// Doubles the panel count until two successive composites agree within
/// abs_tol/2; throws numerical_error if the refinement stalls.
double integrate_to_tolerance(const std::function<double(double)>& f, double a, double b,
                              double abs_tol);

}  // namespace wishartsum::quadrature
