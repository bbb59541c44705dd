#include "wishartsum/linalg.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "wishartsum/errors.hpp"

namespace wishartsum::linalg {

namespace {

const DoubleDouble kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};

}  // namespace

LogDet log_det(DDMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("log_det: matrix not square");
  const int n = m.rows();
  if (n == 0) return LogDet{LogValue::one(), 1.0};

  long scale_exp = 0;  // sum of powers of two factored out

  // Row then column scaling by powers of two; exact, sign-preserving.
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < n; ++i) {
      double mx = 0.0;
      for (int j = 0; j < n; ++j) {
        double v = std::fabs(pass == 0 ? m(i, j).hi : m(j, i).hi);
        if (!std::isfinite(v)) throw numerical_error("log_det: non-finite matrix entry");
        mx = std::max(mx, v);
      }
      if (mx == 0.0) return LogDet{LogValue::zero(), 0.0};
      int e = std::ilogb(mx);
      scale_exp += e;
      for (int j = 0; j < n; ++j) {
        if (pass == 0) {
          m(i, j) = ldexp(m(i, j), -e);
        } else {
          m(j, i) = ldexp(m(j, i), -e);
        }
      }
    }
  }

  int sign = 1;
  DoubleDouble mantissa{1.0};
  long mant_exp = 0;
  double min_pivot = std::numeric_limits<double>::infinity();
  double max_pivot = 0.0;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(m(col, col).hi);
    for (int i = col + 1; i < n; ++i) {
      double v = std::fabs(m(i, col).hi);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return LogDet{LogValue::zero(), 0.0};
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
      sign = -sign;
    }
    DoubleDouble d = m(col, col);
    min_pivot = std::min(min_pivot, std::fabs(d.hi));
    max_pivot = std::max(max_pivot, std::fabs(d.hi));
    if (d.hi < 0.0) {
      sign = -sign;
      mantissa *= -d;
    } else {
      mantissa *= d;
    }
    int e;
    std::frexp(mantissa.hi, &e);
    mantissa = ldexp(mantissa, -e);
    mant_exp += e;

    for (int i = col + 1; i < n; ++i) {
      DoubleDouble f = m(i, col) / d;
      if (f.hi == 0.0) continue;
      for (int j = col + 1; j < n; ++j) {
        m(i, j) -= f * m(col, j);
      }
    }
  }

  DoubleDouble log_mag = DoubleDouble(double(scale_exp + mant_exp)) * kLn2 + log(mantissa);
  return LogDet{LogValue::from_log(sign, log_mag.to_double()), min_pivot / max_pivot};
}

}  // namespace wishartsum::linalg
