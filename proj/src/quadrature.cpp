#include "wishartsum/quadrature.hpp"

#include <array>
#include <cmath>

#include "wishartsum/errors.hpp"

namespace wishartsum::quadrature {

namespace {

constexpr int kOrder = 32;

struct GaussRule {
  std::array<double, kOrder> node;
  std::array<double, kOrder> weight;
};

// Nodes of P_32 by Newton iteration; weights 2 / ((1-x^2) P'_32(x)^2).
GaussRule build_rule() {
  GaussRule r;
  const int n = kOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.node[i] = -x;
    r.node[n - 1 - i] = x;
    r.weight[i] = w;
    r.weight[n - 1 - i] = w;
  }
  return r;
}

const GaussRule& rule() {
  static const GaussRule r = build_rule();
  return r;
}

}  // namespace

double panel_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                            int panels) {
  const GaussRule& r = rule();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    double half = 0.5 * h;
    double acc = 0.0;
    for (int i = 0; i < kOrder; ++i) {
      acc += r.weight[i] * f(mid + half * r.node[i]);
    }
    total += acc * half;
  }
  return total;
}

double integrate_to_tolerance(const std::function<double(double)>& f, double a, double b,
                              double abs_tol) {
  int panels = 8;
  double prev = panel_gauss_legendre(f, a, b, panels);
  for (panels = 16; panels <= 1024; panels *= 2) {
    double cur = panel_gauss_legendre(f, a, b, panels);
    // the 1e-14 |cur| floor keeps large-magnitude integrals from chasing
    // refinement differences below their own rounding noise
    if (std::fabs(cur - prev) < 0.5 * abs_tol + 1e-14 * std::fabs(cur)) return cur;
    prev = cur;
  }
  throw numerical_error("integrate_to_tolerance: panel refinement did not converge");
}

}  // namespace wishartsum::quadrature
