#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference variant and,
// on x86-64 builds, an AVX2/FMA variant. The active table is chosen once at
// startup from CPU features; SWRL_SIMD=scalar forces the reference path.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace swrl::simd {

enum class Level { scalar, avx2 };

std::string_view level_name(Level level) noexcept;

struct ClippedLogSum {
  double value = 0.0;        // sum of -log(max(arg, eps))
  std::size_t clipped = 0;   // how many args were <= eps
};

struct KernelTable {
  Level level;

  double (*dot)(const double* x, const double* y, std::size_t n);

  double (*sum_squares)(const double* x, std::size_t n);

  /// sum_i -log(max(offset + scale * x_i, eps)), counting clipped terms.
  ClippedLogSum (*neg_log_affine_sum)(const double* x, std::size_t n, double offset,
                                      double scale, double eps);

  /// out_i = sum_{d=0}^{degree} z_i^d / d!  (z_i >= 0), running-term recurrence
  /// with early exit once the remaining terms cannot change the sum.
  void (*exp_trunc_batch)(const double* z, std::size_t n, unsigned degree, double* out);

  /// row[j] += coeff * x[j] for j in [0, n). Uses separate multiply and add so
  /// all variants agree bitwise.
  void (*axpy)(double* row, const double* x, std::size_t n, double coeff);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the variant is not compiled in or the CPU lacks the features.
const KernelTable* avx2_kernels() noexcept;

/// Table selected for this process.
const KernelTable& kernels() noexcept;

// Convenience wrappers over the active table.
inline double dot(std::span<const double> x, std::span<const double> y) {
  return kernels().dot(x.data(), y.data(), x.size());
}
inline double sum_squares(std::span<const double> x) {
  return kernels().sum_squares(x.data(), x.size());
}

}  // namespace swrl::simd
