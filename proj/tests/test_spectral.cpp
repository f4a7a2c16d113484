#include <doctest.h>

#include <cmath>
#include <vector>

#include "swrl/errors.hpp"
#include "swrl/model.hpp"
#include "swrl/normal.hpp"
#include "swrl/roc.hpp"
#include "swrl/spectral.hpp"
#include "swrl/stats.hpp"

using namespace swrl;

namespace {

double mu_of(double lambda) { return -std::log(1.0 - lambda * lambda); }

}  // namespace

TEST_CASE("eigenvalues of small matrices, descending") {
  SquareMatrix d(2);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  const Spectrum s = eigenvalues(d);
  CHECK(s.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0));

  SquareMatrix swap(2);
  swap(0, 1) = swap(1, 0) = 1.0;
  const Spectrum t = eigenvalues(swap);
  CHECK(t.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(t.eigenvalues[1] == doctest::Approx(-1.0));
}

TEST_CASE("eigenvalue sum equals the trace") {
  Rng rng(1);
  const SquareMatrix y = sample_spiked(SpikePrior::rademacher(), 0.8, 300, rng).observation();
  const Spectrum s = eigenvalues(y);
  double sum = 0;
  for (double e : s.eigenvalues) sum += e;
  CHECK(std::abs(sum - y.trace()) < 1e-9);
}

TEST_CASE("non-finite input is a convergence failure") {
  SquareMatrix y(3);
  y(1, 1) = NAN;
  CHECK_THROWS_AS(eigenvalues(y), Error);
}

TEST_CASE("top GOE eigenvalue near 2") {
  const StreamKey key(2, "top-goe");
  int inside = 0;
  for (std::size_t s = 0; s < 40; ++s) {
    Rng rng = key.stream(s);
    const double top = tridiagonal_max_eigenvalue(sample_goe_tridiagonal(2000, rng));
    inside += top >= 1.9 && top <= 2.2;
  }
  CHECK(inside >= 38);
  Rng rng(3);
  const double dense_top = eigenvalues(sample_goe(1000, rng)).top();
  CHECK(dense_top > 1.85);
  CHECK(dense_top < 2.2);
}

TEST_CASE("lss statistic values and clipping") {
  const Spectrum zeros{std::vector<double>(5, 0.0)};
  const LssValue v = lss_statistic(zeros, 0.6);
  CHECK(v.value == doctest::Approx(-5.0 * std::log(1.36)));
  CHECK(v.value == doctest::Approx(-1.5375).epsilon(1e-4));
  CHECK(v.clip_count == 0);

  const Spectrum bounded{{1.9, 0.3, -1.2, -2.0}};
  CHECK(std::abs(lss_statistic(bounded, 1e-9).value) < 1e-8);
  CHECK(lss_statistic(bounded, 0.0).value == 0.0);

  const double lambda = 0.6;
  const Spectrum edge{{lambda + 1.0 / lambda, 0.0}};
  const LssValue clipped = lss_statistic(edge, lambda);
  CHECK(clipped.clip_count == 1);
  CHECK(std::isfinite(clipped.value));

  CHECK_THROWS_AS(lss_statistic(zeros, 1.0), Error);
}

TEST_CASE("tridiagonal lss falls back to the spectrum when clipping") {
  const double lambda = 0.75;
  const Tridiagonal t{{lambda + 1.0 / lambda, 0.0}, {0.0}};
  const LssValue v = lss_statistic(t, lambda);
  CHECK(v.clip_count == 1);
  CHECK(std::isfinite(v.value));
}

TEST_CASE("null calibration: sd and determinism") {
  const StreamKey key(5, "calib");
  const NullCalibration c6 = calibrate_null(0.6, 1000, 2000, key);
  CHECK(c6.sd == doctest::Approx(std::sqrt(2.0 * mu_of(0.6))).epsilon(0.15));
  CHECK(c6.standardized_sorted.size() == 2000);
  CHECK(std::is_sorted(c6.standardized_sorted.begin(), c6.standardized_sorted.end()));
  const NullCalibration again = calibrate_null(0.6, 1000, 2000, key);
  CHECK(again.mean == c6.mean);
  CHECK(again.sd == c6.sd);
  const NullCalibration c3 = calibrate_null(0.3, 1000, 2000, key);
  CHECK(c3.sd < c6.sd);
  CHECK_THROWS_AS(calibrate_null(0.6, 1000, 50, key), Error);
}

TEST_CASE("calibrated tests: constants and size control") {
  const NullCalibration calib = calibrate_null(0.6, 1000, 2000, StreamKey(6, "calib"));
  const CalibratedTest never = make_test(0.6, 1000, 0.0, calib);
  const CalibratedTest always = make_test(0.6, 1000, 1.0, calib);
  CHECK(never.decide(1e300) == Outcome::q);
  CHECK(always.decide(-1e300) == Outcome::p);

  const CalibratedTest half = make_test(0.6, 1000, 0.5, calib);
  const StreamKey fresh(6, "fresh-null");
  std::size_t rejections = 0;
  for (std::size_t i = 0; i < 2000; ++i) {
    Rng rng = fresh.stream(i);
    rejections += half.decide(sample_lss(0.0, 0.6, 1000, rng).value) == Outcome::p;
  }
  CHECK(std::abs(rejections / 2000.0 - 0.5) <= 0.03);
}

TEST_CASE("run_test on dense observations") {
  const std::size_t n = 200;
  const NullCalibration calib = calibrate_null(0.6, n, 1000, StreamKey(7, "calib"));
  const CalibratedTest test = make_test(0.6, n, 0.05, calib);
  Rng rng(7);
  const SquareMatrix strong = sample_spiked(SpikePrior::rademacher(), 5.0, n, rng).observation();
  CHECK(run_test(constant_test(Outcome::q, 0.6, n), strong) == Outcome::q);
  CHECK(run_test(constant_test(Outcome::p, 0.6, n), strong) == Outcome::p);

  int hits = 0;
  const StreamKey key(7, "strong");
  for (std::size_t i = 0; i < 100; ++i) {
    Rng r = key.stream(i);
    hits += run_test(test, sample_spiked(SpikePrior::rademacher(), 5.0, n, r).observation()) == Outcome::p;
  }
  CHECK(hits >= 99);
  CHECK(run_test(test, strong) == run_test(test, strong));
  CHECK_THROWS_AS(run_test(test, SquareMatrix(10)), Error);
}

TEST_CASE("empirical ROC at lambda = 0 lies on the diagonal") {
  MonteCarloOptions opts;
  opts.statistic_lambda = 0.6;
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  const EmpiricalRoc roc = empirical_roc(0.0, 500, 2000, grid, StreamKey(8, "roc"), opts);
  for (const RocEstimate& e : roc.points) {
    const double sd = std::sqrt(e.se_alpha * e.se_alpha + e.se_beta * e.se_beta);
    CHECK(std::abs(e.beta_hat - e.alpha_hat) <= 3.0 * sd + 1e-12);
  }
}

TEST_CASE("empirical ROC follows phi_lambda") {
  const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
  const EmpiricalRoc roc = empirical_roc(0.6, 1000, 2000, grid, StreamKey(9, "roc"));
  for (const RocEstimate& e : roc.points) {
    if (e.alpha_target == 0.5) CHECK(std::abs(e.beta_hat - 0.6817) <= 0.05);
    CHECK(e.beta_hat >= e.alpha_hat - 3.0 * e.se_alpha);
  }
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    CHECK(roc.points[i].beta_hat >= roc.points[i - 1].beta_hat);
  }
  CHECK(roc.standardized_gap == doctest::Approx(std::sqrt(mu_of(0.6) / 2.0)).epsilon(0.10));
  CHECK(roc.clipped_trials <= 40);

  const EmpiricalRoc strong = empirical_roc(0.9, 1000, 2000, std::vector<double>{0.1}, StreamKey(9, "roc9"));
  CHECK(std::abs(strong.points[0].beta_hat - phi_eval(0.9, 0.1)) <= 0.06);
}

TEST_CASE("clip rate: at most 1% of trials clip for lambda <= 0.9, n >= 500") {
  const StreamKey key(10, "clip");
  for (double model_lambda : {0.0, 0.9}) {
    std::size_t clipped = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
      Rng rng = key.child(model_lambda == 0.0 ? "null" : "alternative").stream(i);
      clipped += sample_lss(model_lambda, 0.9, 500, rng).clip_count > 0;
    }
    INFO("model lambda " << model_lambda);
    CHECK(clipped <= 10);
  }
}

TEST_CASE("top eigenvalue diagnostic and the BBP limit") {
  CHECK(bbp_top_eigenvalue_limit(0.5) == 2.0);
  CHECK(bbp_top_eigenvalue_limit(1.5) == doctest::Approx(2.1666667));
  const auto low = top_eigenvalue_diag(0.5, 2000, 20, StreamKey(11, "diag"));
  const auto high = top_eigenvalue_diag(1.5, 2000, 20, StreamKey(11, "diag"));
  const auto edge = top_eigenvalue_diag(1.0, 2000, 20, StreamKey(11, "diag"));
  CHECK(std::abs(low.mean - 2.0) <= 0.05 * 2.0);
  CHECK(std::abs(high.mean - 2.1666667) <= 0.05 * 2.1666667);
  CHECK(edge.mean >= 1.9);
  CHECK(edge.mean <= 2.1);
  CHECK(high.trials == 20);
}

TEST_CASE("dense route runs the same pipeline") {
  MonteCarloOptions opts;
  opts.route = SpectrumRoute::dense;
  const NullCalibration c = calibrate_null(0.6, 100, 300, StreamKey(12, "dense"), opts);
  CHECK(c.sd == doctest::Approx(std::sqrt(2.0 * mu_of(0.6))).epsilon(0.2));
}
