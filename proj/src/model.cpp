#include "swrl/model.hpp"

#include <cmath>
#include <random>

#include "swrl/simd/kernels.hpp"

namespace swrl {
namespace {

void mirror_upper(SquareMatrix& m) {
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) m(j, i) = m(i, j);
  }
}

}  // namespace

SquareMatrix sample_goe(std::size_t n, Rng& rng) {
  SquareMatrix w(n);
  const double off_sd = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag_sd = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    w(i, i) = diag_sd * rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) w(i, j) = off_sd * rng.normal();
  }
  mirror_upper(w);
  return w;
}

SpikedSample sample_spiked(const SpikePrior& prior, double lambda, std::size_t n, Rng& rng,
                           SpikedOptions options) {
  SquareMatrix y = sample_goe(n, rng);
  std::optional<SquareMatrix> noise;
  if (options.retain_noise) noise = y;

  std::optional<std::vector<double>> spike;
  if (lambda > 0.0) {
    spike = sample_vector(prior, n, rng);
    const std::vector<double>& x = *spike;
    const double norm_sq = simd::sum_squares(x);
    if (norm_sq > 0.0) {
      const double scale = lambda / norm_sq;
      const auto& k = simd::kernels();
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0.0) continue;
        k.axpy(&y(i, i), &x[i], n - i, scale * x[i]);
      }
      mirror_upper(y);
    }
  }
  return SpikedSample(std::move(y), lambda, prior.tag(), std::move(spike), std::move(noise));
}

Tridiagonal sample_goe_tridiagonal(std::size_t n, Rng& rng) {
  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag_sd = std::sqrt(2.0) * inv_sqrt_n;
  for (std::size_t k = 0; k < n; ++k) t.diag[k] = diag_sd * rng.normal();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(n - 1 - k));
    t.offdiag[k] = std::sqrt(chi2(rng)) * inv_sqrt_n;
  }
  return t;
}

Tridiagonal sample_spiked_tridiagonal(const SpikePrior& prior, double lambda, std::size_t n,
                                      Rng& rng) {
  Tridiagonal t = sample_goe_tridiagonal(n, rng);
  if (lambda > 0.0 && n > 0) {
    // Only the event x = 0 matters; for priors without an atom at 0 no draw
    // is needed.
    bool nonzero = true;
    if (prior.zero_mass() > 0.0) {
      std::vector<double> x = sample_vector(prior, n, rng);
      nonzero = simd::sum_squares(x) > 0.0;
    }
    if (nonzero) t.diag[0] += lambda;
  }
  return t;
}

}  // namespace swrl
