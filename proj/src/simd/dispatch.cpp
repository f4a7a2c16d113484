#include <cstdlib>
#include <string_view>

#include "swrl/simd/kernels.hpp"

namespace swrl::simd {

#if defined(SWRL_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;  // kernels_avx2.cpp
#endif

std::string_view level_name(Level level) noexcept {
  return level == Level::avx2 ? "avx2" : "scalar";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(SWRL_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() noexcept {
  static const KernelTable* active = [] {
    const char* forced = std::getenv("SWRL_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
  }();
  return *active;
}

}  // namespace swrl::simd
