#include <algorithm>
#include <cmath>

#include "swrl/simd/kernels.hpp"

namespace swrl::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_squares_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

ClippedLogSum neg_log_affine_sum_scalar(const double* x, std::size_t n, double offset,
                                        double scale, double eps) {
  ClippedLogSum out;
  for (std::size_t i = 0; i < n; ++i) {
    double arg = offset + scale * x[i];
    if (!(arg > eps)) {
      arg = eps;
      ++out.clipped;
    }
    out.value -= std::log(arg);
  }
  return out;
}

void exp_trunc_batch_scalar(const double* z, std::size_t n, unsigned degree, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = z[i];
    double term = 1.0;
    double sum = 1.0;
    for (unsigned d = 1; d <= degree; ++d) {
      term = term * zi / static_cast<double>(d);
      sum += term;
      // Past d = 2z every further term is at most half the previous one.
      if (static_cast<double>(d) >= 2.0 * zi && term <= sum * 0x1p-60) break;
    }
    out[i] = sum;
  }
}

void axpy_scalar(double* row, const double* x, std::size_t n, double coeff) {
  for (std::size_t j = 0; j < n; ++j) {
    const double prod = coeff * x[j];
    row[j] = row[j] + prod;
  }
}

constexpr KernelTable kScalar{
    Level::scalar,     dot_scalar,           sum_squares_scalar, neg_log_affine_sum_scalar,
    exp_trunc_batch_scalar, axpy_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace swrl::simd
