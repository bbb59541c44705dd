#include "wishartsum/kernels/gram.hpp"

#include <immintrin.h>

namespace wishartsum::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

// Two interleaved complex values per 256-bit lane. For the cross term,
// dot(r_i, conj r_j) needs re = ar*br + ai*bi and im = ai*br - ar*bi; the
// second accumulator uses a pair-swapped, sign-flipped copy of r_j.
void gram_accumulate_avx2(const cplx* a, int n, int cols, cplx* h) {
  const double* base = reinterpret_cast<const double*>(a);
  const __m256d signs = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
  const int vec_end = (cols / 2) * 2;

  for (int i = 0; i < n; ++i) {
    const double* ri = base + size_t(i) * cols * 2;

    __m256d acc = _mm256_setzero_pd();
    for (int k = 0; k < vec_end; k += 2) {
      __m256d va = _mm256_loadu_pd(ri + 2 * k);
      acc = _mm256_fmadd_pd(va, va, acc);
    }
    double diag = hsum(acc);
    for (int k = vec_end; k < cols; ++k) {
      diag += ri[2 * k] * ri[2 * k] + ri[2 * k + 1] * ri[2 * k + 1];
    }
    h[size_t(i) * n + i] += diag;

    for (int j = 0; j < i; ++j) {
      const double* rj = base + size_t(j) * cols * 2;
      __m256d acc_re = _mm256_setzero_pd();
      __m256d acc_im = _mm256_setzero_pd();
      for (int k = 0; k < vec_end; k += 2) {
        __m256d va = _mm256_loadu_pd(ri + 2 * k);
        __m256d vb = _mm256_loadu_pd(rj + 2 * k);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        __m256d vbs = _mm256_mul_pd(_mm256_permute_pd(vb, 0x5), signs);
        acc_im = _mm256_fmadd_pd(va, vbs, acc_im);
      }
      double re = hsum(acc_re);
      double im = hsum(acc_im);
      for (int k = vec_end; k < cols; ++k) {
        double ar = ri[2 * k], ai = ri[2 * k + 1];
        double br = rj[2 * k], bi = rj[2 * k + 1];
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
      }
      h[size_t(i) * n + j] += cplx(re, im);
      h[size_t(j) * n + i] += cplx(re, -im);
    }
  }
}

}  // namespace wishartsum::kernels
