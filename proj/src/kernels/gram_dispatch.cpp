#include "wishartsum/kernels/gram.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace wishartsum::kernels {

bool avx2_kernel_available() {
#if defined(WISHARTSUM_AVX2_COMPILED)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

KernelInfo pick_kernel() {
  const char* env = std::getenv("WISHART_SUM_KERNEL");
  std::string choice = env ? env : "auto";
  if (choice == "scalar") {
    return {"scalar", gram_accumulate_scalar};
  }
  if (choice == "avx2") {
    if (!avx2_kernel_available()) {
      throw std::invalid_argument("WISHART_SUM_KERNEL=avx2 requested but AVX2+FMA unavailable");
    }
#if defined(WISHARTSUM_AVX2_COMPILED)
    return {"avx2", gram_accumulate_avx2};
#endif
  }
  if (choice != "auto") {
    throw std::invalid_argument("WISHART_SUM_KERNEL must be scalar, avx2, or auto");
  }
#if defined(WISHARTSUM_AVX2_COMPILED)
  if (avx2_kernel_available()) {
    return {"avx2", gram_accumulate_avx2};
  }
#endif
  return {"scalar", gram_accumulate_scalar};
}

}  // namespace

const KernelInfo& selected_gram_kernel() {
  static const KernelInfo info = pick_kernel();
  return info;
}

}  // namespace wishartsum::kernels
