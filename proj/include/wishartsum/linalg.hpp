#pragma once

#include <vector>

#include "wishartsum/ddouble.hpp"
#include "wishartsum/log_value.hpp"

namespace wishartsum::linalg {

/// Dense row-major matrix of double-double entries.
class DDMatrix {
 public:
  DDMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

  DoubleDouble& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const DoubleDouble& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_, cols_;
  std::vector<DoubleDouble> a_;
};

struct LogDet {
  LogValue value;
  /// min |pivot| / max |pivot| of the equilibrated factorization; collapses
  /// toward zero when sigma_B values are nearly coincident.
  double min_pivot_ratio = 1.0;
};

/// Determinant of a square matrix as sign and log magnitude. Rows and
/// columns are pre-scaled by powers of two (exact), then LU with partial
/// pivoting runs in double-double; the diagonal product is accumulated as
/// mantissa-and-exponent so arbitrarily scaled determinants stay finite.
LogDet log_det(DDMatrix m);

}  // namespace wishartsum::linalg
