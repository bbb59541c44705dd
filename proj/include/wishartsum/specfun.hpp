#pragma once

// Scalar special-function kernel: gamma family plus confluent and Gauss
// hypergeometric functions with parameter-shift derivatives, over the
// argument ranges the two-Wishart ensemble formulas produce.

#include "wishartsum/ddouble.hpp"

namespace wishartsum::specfun {

/// ln Gamma(a), a > 0.
double ln_gamma(double a);

/// Rising factorial (a)_k = a(a+1)...(a+k-1); (a)_0 = 1.
double pochhammer(double a, int k);

/// Lower incomplete gamma(a, z) for a > 0. For z < 0 the analytic
/// continuation is supported only when a is a positive integer.
double lower_incomplete_gamma(double a, double z);

/// Regularized P(a, z) = gamma(a, z) / Gamma(a) and Q = 1 - P, z >= 0.
double gamma_p(double a, double z);
double gamma_q(double a, double z);

/// Kummer's 1F1(a; b; z); b must not be a nonpositive integer. Arguments
/// z < 0 are routed through the Kummer transformation.
double hyp1f1(double a, double b, double z);

/// k-th derivative of 1F1 with respect to z, via the parameter-shift
/// relation ((a)_k / (b)_k) 1F1(a+k; b+k; z).
double hyp1f1_deriv(int k, double a, double b, double z);

/// Gauss 2F1(a, b; c; z) for z < 1; z < 0 goes through the Pfaff
/// transformation onto (0, 1).
double hyp2f1(double a, double b, double c, double z);

/// k-th derivative of 2F1 with respect to z, via
/// ((a)_k (b)_k / (c)_k) 2F1(a+k, b+k; c+k; z).
double hyp2f1_deriv(int k, double a, double b, double c, double z);

/// 1F1(alpha; alpha + n_a; z) through the finite lower-incomplete-gamma
/// reduction valid for integer alpha >= 1; an independent cross-check path
/// for the values appearing in the joint density. Accuracy degrades for
/// |z| well past ~50 (alternating incomplete-gamma sum).
double hyp1f1_elementary(int alpha, int n_a, double z);

// Double-double evaluations used by the density determinant assembly,
// where entry rounding is amplified by the quasi-Vandermonde structure.
DoubleDouble hyp1f1_dd(double a, double b, DoubleDouble z);
DoubleDouble hyp2f1_dd(double a, double b, double c, DoubleDouble z);
DoubleDouble hyp1f1_deriv_dd(int k, double a, double b, DoubleDouble z);
DoubleDouble hyp2f1_deriv_dd(int k, double a, double b, double c, DoubleDouble z);

}  // namespace wishartsum::specfun
