#include "swrl/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <mutex>
#include <string>

#include "swrl/errors.hpp"

extern "C" void openblas_set_num_threads(int num_threads);

namespace swrl {
namespace {

// Monte-Carlo parallelism lives in our own worker pool; BLAS stays serial.
void pin_blas_threads() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

}  // namespace

bool SquareMatrix::is_symmetric() const noexcept {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (std::bit_cast<unsigned long long>((*this)(i, j)) !=
          std::bit_cast<unsigned long long>((*this)(j, i))) {
        return false;
      }
    }
  }
  return true;
}

double SquareMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SquareMatrix::frobenius_distance(const SquareMatrix& other) const {
  if (other.n_ != n_) fail(Errc::DimensionMismatch, "frobenius_distance: sizes differ");
  double acc = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) {
    const double d = data_[k] - other.data_[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<double> symmetric_eigenvalues(const SquareMatrix& y) {
  pin_blas_threads();
  const auto n = static_cast<lapack_int>(y.dim());
  std::vector<double> a(y.values().begin(), y.values().end());
  for (double v : a) {
    if (!std::isfinite(v)) fail(Errc::ConvergenceFailure, "eigenvalues: non-finite matrix entry");
  }
  std::vector<double> w(y.dim());
  const lapack_int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) {
    fail(Errc::ConvergenceFailure, "dsyevd returned info=" + std::to_string(info));
  }
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

std::vector<double> tridiagonal_eigenvalues(const Tridiagonal& t) {
  const auto n = static_cast<lapack_int>(t.dim());
  std::vector<double> d = t.diag;
  std::vector<double> e = t.offdiag;
  e.resize(std::max<std::size_t>(1, t.dim()));
  const lapack_int info = LAPACKE_dsterf(n, d.data(), e.data());
  if (info != 0) {
    fail(Errc::ConvergenceFailure, "dsterf returned info=" + std::to_string(info));
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

double tridiagonal_max_eigenvalue(const Tridiagonal& t) {
  const auto n = static_cast<lapack_int>(t.dim());
  std::vector<double> e = t.offdiag;
  e.resize(std::max<std::size_t>(1, t.dim()));
  lapack_int found = 0;
  lapack_int nsplit = 0;
  std::vector<double> w(t.dim());
  std::vector<lapack_int> iblock(t.dim());
  std::vector<lapack_int> isplit(t.dim());
  const lapack_int info =
      LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, n, n, 0.0, t.diag.data(), e.data(), &found, &nsplit,
                     w.data(), iblock.data(), isplit.data());
  if (info != 0 || found != 1) {
    fail(Errc::ConvergenceFailure, "dstebz returned info=" + std::to_string(info));
  }
  return w[0];
}

std::vector<double> shifted_tridiagonal_pivots(const Tridiagonal& t, double shift, double scale) {
  const std::size_t n = t.dim();
  std::vector<double> pivots(n);
  if (n == 0) return pivots;
  pivots[0] = shift - scale * t.diag[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double b = scale * t.offdiag[k - 1];
    pivots[k] = (shift - scale * t.diag[k]) - b * b / pivots[k - 1];
  }
  return pivots;
}

}  // namespace swrl
