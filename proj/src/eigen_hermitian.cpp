#include "wishartsum/eigen_hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wishartsum/errors.hpp"

namespace wishartsum {

namespace {

using cplx = std::complex<double>;

// Householder reduction to real symmetric tridiagonal (d, e). Off-diagonal
// phases are rotated away by an implicit diagonal similarity, which leaves
// the spectrum unchanged.
void tridiagonalize(std::vector<cplx>& a, int n, std::vector<double>& d, std::vector<double>& e) {
  auto at = [&](int i, int j) -> cplx& { return a[size_t(i) * n + j]; };

  for (int k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (int i = k + 1; i < n; ++i) norm2 += std::norm(at(i, k));
    double norm = std::sqrt(norm2);
    if (norm == 0.0) {
      continue;  // column already reduced
    }
    cplx x0 = at(k + 1, k);
    cplx phase = (x0 == 0.0) ? cplx(1.0, 0.0) : x0 / std::abs(x0);
    cplx alpha = -phase * norm;

    // v = x - alpha e1, normalized
    std::vector<cplx> v(n - k - 1);
    for (int i = k + 1; i < n; ++i) v[i - k - 1] = at(i, k);
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (const cplx& c : v) vnorm2 += std::norm(c);
    if (vnorm2 == 0.0) continue;
    double inv = 1.0 / std::sqrt(vnorm2);
    for (cplx& c : v) c *= inv;

    // trailing block B <- B - v q^H - q v^H with q = 2Bv - 2(v^H B v)v
    const int b0 = k + 1;
    const int bn = n - b0;
    std::vector<cplx> w(bn, cplx(0.0));
    for (int i = 0; i < bn; ++i) {
      cplx acc(0.0);
      for (int j = 0; j < bn; ++j) acc += at(b0 + i, b0 + j) * v[j];
      w[i] = acc;
    }
    double kappa = 0.0;
    for (int i = 0; i < bn; ++i) kappa += std::real(std::conj(v[i]) * w[i]);
    std::vector<cplx> q(bn);
    for (int i = 0; i < bn; ++i) q[i] = 2.0 * w[i] - 2.0 * kappa * v[i];
    for (int i = 0; i < bn; ++i) {
      for (int j = 0; j < bn; ++j) {
        at(b0 + i, b0 + j) -= v[i] * std::conj(q[j]) + q[i] * std::conj(v[j]);
      }
    }

    at(k + 1, k) = alpha;
    at(k, k + 1) = std::conj(alpha);
    for (int i = k + 2; i < n; ++i) {
      at(i, k) = 0.0;
      at(k, i) = 0.0;
    }
  }

  d.resize(n);
  e.assign(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = std::real(at(i, i));
  for (int i = 0; i + 1 < n; ++i) e[i] = std::abs(at(i + 1, i));
}

// Implicit-shift QL on the tridiagonal (d, e); eigenvalues only.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, int n) {
  if (n <= 1) return;
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      while (m < n - 1) {
        double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-16 * dd) break;
        ++m;
      }
      if (m == l) break;
      if (++iter > 50) {
        throw numerical_error("hermitian_eigenvalues: QL iteration did not converge");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (i == l) {
          d[l] -= p;
          e[l] = g;
          e[m] = 0.0;
        }
      }
    }
  }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(std::vector<cplx> h, int n) {
  if (n < 1 || n > 64) {
    throw std::invalid_argument("hermitian_eigenvalues: n must be in [1, 64]");
  }
  if (h.size() != size_t(n) * n) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix size mismatch");
  }

  double scale = 0.0;
  for (const cplx& c : h) scale = std::max(scale, std::abs(c));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      worst = std::max(worst, std::abs(h[size_t(i) * n + j] - std::conj(h[size_t(j) * n + i])));
    }
  }
  if (scale > 0.0 && worst > 1e-12 * scale) {
    throw std::domain_error("hermitian_eigenvalues: input is not Hermitian");
  }

  if (n == 1) return {std::real(h[0])};

  std::vector<double> d, e;
  tridiagonalize(h, n, d, e);
  ql_implicit(d, e, n);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace wishartsum
