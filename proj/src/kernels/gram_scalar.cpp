#include "wishartsum/kernels/gram.hpp"

namespace wishartsum::kernels {

void gram_accumulate_scalar(const cplx* a, int n, int cols, cplx* h) {
  for (int i = 0; i < n; ++i) {
    const cplx* ri = a + size_t(i) * cols;
    // diagonal: real by construction
    double diag = 0.0;
    for (int k = 0; k < cols; ++k) diag += std::norm(ri[k]);
    h[size_t(i) * n + i] += diag;

    for (int j = 0; j < i; ++j) {
      const cplx* rj = a + size_t(j) * cols;
      double re = 0.0, im = 0.0;
      for (int k = 0; k < cols; ++k) {
        re += ri[k].real() * rj[k].real() + ri[k].imag() * rj[k].imag();
        im += ri[k].imag() * rj[k].real() - ri[k].real() * rj[k].imag();
      }
      h[size_t(i) * n + j] += cplx(re, im);
      h[size_t(j) * n + i] += cplx(re, -im);
    }
  }
}

}  // namespace wishartsum::kernels
