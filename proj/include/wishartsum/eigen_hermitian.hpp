#pragma once

#include <complex>
#include <vector>

namespace wishartsum {

/// Eigenvalues of a Hermitian matrix (row-major n x n), ascending.
/// Householder tridiagonalization followed by implicit-shift QL; n <= 64.
/// Input must be Hermitian to 1e-12 relative.
std::vector<double> hermitian_eigenvalues(std::vector<std::complex<double>> h, int n);

}  // namespace wishartsum
