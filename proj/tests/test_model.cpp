#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "swrl/linalg.hpp"
#include "swrl/model.hpp"
#include "swrl/spectral.hpp"
#include "swrl/stats.hpp"

using namespace swrl;

namespace {

SquareMatrix dense_of(const Tridiagonal& t) {
  SquareMatrix m(t.dim());
  for (std::size_t i = 0; i < t.dim(); ++i) m(i, i) = t.diag[i];
  for (std::size_t i = 0; i + 1 < t.dim(); ++i) m(i, i + 1) = m(i + 1, i) = t.offdiag[i];
  return m;
}

}  // namespace

TEST_CASE("GOE entry variances") {
  const std::size_t n = 2000;
  double off = 0, diag = 0;
  std::size_t off_count = 0, diag_count = 0;
  const StreamKey key(1, "goe-variance");
  for (std::size_t s = 0; s < 50; ++s) {
    Rng rng = key.stream(s);
    const SquareMatrix w = sample_goe(n, rng);
    REQUIRE(w.is_symmetric());
    for (std::size_t i = 0; i < n; ++i) {
      diag += w(i, i) * w(i, i);
      ++diag_count;
      for (std::size_t j = i + 1; j < n; ++j) {
        off += w(i, j) * w(i, j);
        ++off_count;
      }
    }
  }
  CHECK(off / off_count == doctest::Approx(1.0 / n).epsilon(0.10));
  CHECK(diag / diag_count == doctest::Approx(2.0 / n).epsilon(0.15));
}

TEST_CASE("GOE semicircle support") {
  Rng rng(2);
  const std::size_t n = 2000;
  const auto ev = symmetric_eigenvalues(sample_goe(n, rng));
  const auto inside = std::count_if(ev.begin(), ev.end(), [](double x) { return std::abs(x) <= 2.1; });
  CHECK(static_cast<double>(inside) / n >= 0.99);
}

TEST_CASE("lambda = 0 reproduces sample_goe on the same stream") {
  Rng a(5), b(5);
  const SquareMatrix w = sample_goe(50, a);
  const SpikedSample s = sample_spiked(SpikePrior::rademacher(), 0.0, 50, b);
  CHECK(s.observation() == w);
  CHECK_FALSE(s.planted_spike().has_value());
}

TEST_CASE("the spike has Frobenius norm lambda") {
  Rng rng(6);
  const SpikedSample s = sample_spiked(SpikePrior::rademacher(), 0.7, 300, rng, {.retain_noise = true});
  REQUIRE(s.noise().has_value());
  CHECK(s.observation().is_symmetric());
  CHECK(std::abs(s.observation().frobenius_distance(*s.noise()) - 0.7) < 1e-10);
  CHECK(s.lambda() == 0.7);
  CHECK(s.dim() == 300);
}

TEST_CASE("sparse spike that is entirely zero leaves Y = W") {
  const SpikePrior p = SpikePrior::sparse(0.05);
  bool found = false;
  for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
    Rng rng(seed);
    const SpikedSample s = sample_spiked(p, 0.9, 3, rng, {.retain_noise = true});
    const auto& x = *s.planted_spike();
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
      found = true;
      CHECK(s.observation() == *s.noise());
    }
  }
  CHECK(found);
}

TEST_CASE("same seed gives a bit-identical observation") {
  Rng a(9), b(9);
  const auto ya = sample_spiked(SpikePrior::sparse(0.3), 1.2, 80, a);
  const auto yb = sample_spiked(SpikePrior::sparse(0.3), 1.2, 80, b);
  CHECK(ya.observation() == yb.observation());
}

TEST_CASE("tridiagonal GOE: entries and trace law") {
  const std::size_t n = 400;
  const StreamKey key(3, "tri");
  std::vector<double> traces, sq_off;
  for (std::size_t s = 0; s < 2000; ++s) {
    Rng rng = key.stream(s);
    const Tridiagonal t = sample_goe_tridiagonal(n, rng);
    REQUIRE(t.diag.size() == n);
    REQUIRE(t.offdiag.size() == n - 1);
    double tr = 0, off = 0;
    for (double d : t.diag) tr += d;
    for (double o : t.offdiag) {
      REQUIRE(o >= 0.0);
      off += o * o;
    }
    traces.push_back(tr);
    sq_off.push_back(off);
  }
  // trace ~ N(0, 2); sum of squared off-diagonals has mean (n - 1) / 2.
  CHECK(stats::sample_sd(traces) == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  CHECK(stats::mean(sq_off) == doctest::Approx((n - 1) / 2.0).epsilon(0.01));
}

TEST_CASE("tridiagonal and dense routes have the same spectral law") {
  const std::size_t n = 150, reps = 400;
  for (double lambda : {0.0, 0.6, 1.8}) {
    CAPTURE(lambda);
    std::vector<double> top_dense(reps), top_tri(reps), lss_dense(reps), lss_tri(reps);
    const double stat_lambda = 0.6;
    const StreamKey dk(10, "dense"), tk(10, "tri");
    for (std::size_t i = 0; i < reps; ++i) {
      Rng r1 = dk.stream(i);
      const Spectrum spec = eigenvalues(sample_spiked(SpikePrior::rademacher(), lambda, n, r1).observation());
      top_dense[i] = spec.top();
      lss_dense[i] = lss_statistic(spec, stat_lambda).value;
      Rng r2 = tk.stream(i);
      const Tridiagonal t = sample_spiked_tridiagonal(SpikePrior::rademacher(), lambda, n, r2);
      top_tri[i] = tridiagonal_max_eigenvalue(t);
      lss_tri[i] = lss_statistic(t, stat_lambda).value;
    }
    // two-sample KS critical value at level 0.001
    const double crit = 1.95 * std::sqrt(2.0 / reps);
    CHECK(stats::ks_distance_two_sample(top_dense, top_tri) < crit);
    CHECK(stats::ks_distance_two_sample(lss_dense, lss_tri) < crit);
  }
}

TEST_CASE("tridiagonal LSS via pivots equals the eigenvalue formula") {
  Rng rng(4);
  for (double lambda : {0.3, 0.6, 0.9}) {
    const Tridiagonal t = sample_spiked_tridiagonal(SpikePrior::rademacher(), lambda, 500, rng);
    const LssValue fast = lss_statistic(t, lambda);
    const LssValue slow = lss_statistic(eigenvalues(dense_of(t)), lambda);
    CHECK(fast.clip_count == slow.clip_count);
    CHECK(fast.value == doctest::Approx(slow.value).epsilon(1e-10));
  }
}

TEST_CASE("tridiagonal eigen routines agree with the dense solver") {
  Rng rng(8);
  const Tridiagonal t = sample_goe_tridiagonal(200, rng);
  const auto dense = symmetric_eigenvalues(dense_of(t));
  const auto tri = tridiagonal_eigenvalues(t);
  REQUIRE(dense.size() == tri.size());
  for (std::size_t i = 0; i < tri.size(); ++i) CHECK(std::abs(dense[i] - tri[i]) < 1e-10);
  CHECK(std::abs(tridiagonal_max_eigenvalue(t) - dense.front()) < 1e-10);
}
