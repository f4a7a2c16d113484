#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "swrl/linalg.hpp"
#include "swrl/prior.hpp"
#include "swrl/random.hpp"

namespace swrl {

/// GOE noise: independent entries on and above the diagonal, off-diagonal
/// variance 1/n, diagonal variance 2/n, mirrored so W is bitwise symmetric.
SquareMatrix sample_goe(std::size_t n, Rng& rng);

/// One spiked Wigner observation Y = lambda * x x^T / |x|^2 + W.
///
/// Testing code should only ever see observation(). The spike (and the noise,
/// when requested) are kept for diagnostics.
class SpikedSample {
 public:
  SpikedSample(SquareMatrix y, double lambda, std::string prior_tag,
               std::optional<std::vector<double>> spike, std::optional<SquareMatrix> noise)
      : y_(std::move(y)),
        lambda_(lambda),
        prior_tag_(std::move(prior_tag)),
        spike_(std::move(spike)),
        noise_(std::move(noise)) {}

  const SquareMatrix& observation() const noexcept { return y_; }
  double lambda() const noexcept { return lambda_; }
  std::size_t dim() const noexcept { return y_.dim(); }
  const std::string& prior_tag() const noexcept { return prior_tag_; }

  // Diagnostics only.
  const std::optional<std::vector<double>>& planted_spike() const noexcept { return spike_; }
  const std::optional<SquareMatrix>& noise() const noexcept { return noise_; }

 private:
  SquareMatrix y_;
  double lambda_;
  std::string prior_tag_;
  std::optional<std::vector<double>> spike_;
  std::optional<SquareMatrix> noise_;
};

struct SpikedOptions {
  bool retain_noise = false;
};

/// Draws W first and then (only when lambda > 0) the spike, so at lambda = 0
/// the observation equals sample_goe on the same stream. A zero spike adds
/// nothing: x x^T / |x|^2 is taken to be 0.
SpikedSample sample_spiked(const SpikePrior& prior, double lambda, std::size_t n, Rng& rng,
                           SpikedOptions options = {});

/// Tridiagonal form of GOE(n): diagonal N(0, 2/n), off-diagonal entry k is
/// chi_{n-1-k} / sqrt(n). Householder reduction that fixes e_1 maps a GOE
/// matrix to exactly this law, so its spectrum is distributed as GOE's.
Tridiagonal sample_goe_tridiagonal(std::size_t n, Rng& rng);

/// Tridiagonal matrix with the same spectral law as sample_spiked's Y.
/// Orthogonal invariance of W means the spectrum depends on the spike only
/// through whether it is nonzero, and the reduction keeps e_1 fixed, so the
/// spike becomes lambda added to the (0, 0) entry.
Tridiagonal sample_spiked_tridiagonal(const SpikePrior& prior, double lambda, std::size_t n,
                                      Rng& rng);

}  // namespace swrl
