#pragma once

// Hermitian Gram accumulation h += a a^H, the arithmetic inner loop of the
// Monte Carlo sampler. A scalar reference kernel and an AVX2 variant are
// selected at runtime; both produce entrywise-equivalent results (summation
// order differs, so agreement is to rounding, not bitwise).

#include <complex>

namespace wishartsum::kernels {

using cplx = std::complex<double>;

/// h (row-major n x n) += a a^H for a row-major n x cols.
using GramFn = void (*)(const cplx* a, int n, int cols, cplx* h);

void gram_accumulate_scalar(const cplx* a, int n, int cols, cplx* h);
void gram_accumulate_avx2(const cplx* a, int n, int cols, cplx* h);

struct KernelInfo {
  const char* name;
  GramFn fn;
};

/// Chosen once per process: AVX2+FMA when compiled in and supported by the
/// CPU, else scalar. Env WISHART_SUM_KERNEL=scalar|avx2|auto overrides.
const KernelInfo& selected_gram_kernel();

bool avx2_kernel_available();

}  // namespace wishartsum::kernels
