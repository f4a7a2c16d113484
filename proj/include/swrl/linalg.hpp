#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swrl {

/// Dense n x n real matrix stored row-major in full (not packed) form.
/// Symmetry is a property maintained by the producers, not by this type.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  bool is_symmetric() const noexcept;  // bitwise
  double trace() const noexcept;
  double frobenius_distance(const SquareMatrix& other) const;

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Symmetric tridiagonal matrix: diagonal of length n, off-diagonal n - 1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t dim() const noexcept { return diag.size(); }
};

/// All eigenvalues of a symmetric matrix, descending (LAPACK dsyevd).
std::vector<double> symmetric_eigenvalues(const SquareMatrix& y);

/// All eigenvalues of a symmetric tridiagonal matrix, descending (dsterf).
std::vector<double> tridiagonal_eigenvalues(const Tridiagonal& t);

/// Largest eigenvalue of a symmetric tridiagonal matrix by bisection (dstebz).
double tridiagonal_max_eigenvalue(const Tridiagonal& t);

/// Pivots of the LDL^T factorization of (shift * I - scale * T), computed by
/// the three-term recurrence. All pivots positive iff the matrix is positive
/// definite; their log-sum is its log-determinant.
std::vector<double> shifted_tridiagonal_pivots(const Tridiagonal& t, double shift, double scale);

}  // namespace swrl
