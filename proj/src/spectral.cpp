#include "swrl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swrl/errors.hpp"
#include "swrl/model.hpp"
#include "swrl/parallel.hpp"
#include "swrl/simd/kernels.hpp"
#include "swrl/stats.hpp"

namespace swrl {
namespace {

void check_lss_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    fail(Errc::InvalidArgument, "LSS statistic needs lambda in [0, 1), got " + std::to_string(lambda));
  }
}

std::size_t count_at_or_above(std::span<const double> sorted, double tau) {
  return static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), tau));
}

}  // namespace

Spectrum eigenvalues(const SquareMatrix& y) { return Spectrum{symmetric_eigenvalues(y)}; }

LssValue lss_statistic(const Spectrum& spec, double lambda) {
  check_lss_lambda(lambda);
  const auto r = simd::kernels().neg_log_affine_sum(spec.eigenvalues.data(), spec.size(),
                                                    1.0 + lambda * lambda, -lambda, kClipEpsilon);
  return {r.value, r.clipped};
}

LssValue lss_statistic(const Tridiagonal& t, double lambda) {
  check_lss_lambda(lambda);
  const double shift = 1.0 + lambda * lambda;
  // Positive pivots of (shift - eps) I - lambda T  <=>  no eigenvalue clips.
  const std::vector<double> guard = shifted_tridiagonal_pivots(t, shift - kClipEpsilon, lambda);
  const bool clean = std::all_of(guard.begin(), guard.end(), [](double p) { return p > 0.0; });
  if (!clean) return lss_statistic(Spectrum{tridiagonal_eigenvalues(t)}, lambda);

  const std::vector<double> pivots = shifted_tridiagonal_pivots(t, shift, lambda);
  const auto r =
      simd::kernels().neg_log_affine_sum(pivots.data(), pivots.size(), 0.0, 1.0, kClipEpsilon);
  return {r.value, 0};
}

LssValue sample_lss(double model_lambda, double stat_lambda, std::size_t n, Rng& rng,
                    const MonteCarloOptions& options) {
  if (options.route == SpectrumRoute::dense) {
    const SpikedSample s = sample_spiked(options.prior, model_lambda, n, rng);
    return lss_statistic(eigenvalues(s.observation()), stat_lambda);
  }
  const Tridiagonal t = sample_spiked_tridiagonal(options.prior, model_lambda, n, rng);
  return lss_statistic(t, stat_lambda);
}

NullCalibration calibrate_null(double lambda, std::size_t n, std::size_t calib_trials,
                               const StreamKey& key, const MonteCarloOptions& options) {
  check_lss_lambda(lambda);
  if (calib_trials < kMinCalibrationTrials) {
    fail(Errc::InvalidArgument, "calibration needs at least 100 trials");
  }
  const std::vector<double> h = parallel_map<double>(calib_trials, [&](std::size_t i) {
    Rng rng = key.stream(i);
    return sample_lss(0.0, lambda, n, rng, options).value;
  });

  NullCalibration c;
  c.lambda = lambda;
  c.n = n;
  c.trials = calib_trials;
  c.mean = stats::mean(h);
  c.sd = stats::sample_sd(h);
  if (!(c.sd > 0.0)) fail(Errc::DegenerateDenominator, "null LSS statistic has zero spread");
  c.standardized_sorted.reserve(h.size());
  for (double v : h) c.standardized_sorted.push_back((v - c.mean) / c.sd);
  std::sort(c.standardized_sorted.begin(), c.standardized_sorted.end());
  return c;
}

Outcome CalibratedTest::decide(double statistic) const {
  switch (kind) {
    case Kind::always_q: return Outcome::q;
    case Kind::always_p: return Outcome::p;
    case Kind::threshold: break;
  }
  return standardize(statistic) >= tau ? Outcome::p : Outcome::q;
}

CalibratedTest constant_test(Outcome outcome, double lambda, std::size_t n) {
  CalibratedTest t;
  t.kind = outcome == Outcome::p ? CalibratedTest::Kind::always_p : CalibratedTest::Kind::always_q;
  t.lambda = lambda;
  t.n = n;
  t.target_alpha = outcome == Outcome::p ? 1.0 : 0.0;
  t.tau = outcome == Outcome::p ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
  return t;
}

CalibratedTest make_test(double lambda, std::size_t n, double target_alpha,
                         const NullCalibration& calib) {
  if (!(target_alpha >= 0.0 && target_alpha <= 1.0)) {
    fail(Errc::InvalidArgument, "target_alpha must lie in [0, 1]");
  }
  if (target_alpha == 0.0) return constant_test(Outcome::q, lambda, n);
  if (target_alpha == 1.0) return constant_test(Outcome::p, lambda, n);
  if (calib.trials < kMinCalibrationTrials || !(calib.sd > 0.0)) {
    fail(Errc::InvalidArgument, "make_test needs a calibration with >= 100 trials and sd > 0");
  }

  CalibratedTest t;
  t.lambda = lambda;
  t.n = n;
  t.null_mean = calib.mean;
  t.null_sd = calib.sd;
  t.calib_trials = calib.trials;
  t.target_alpha = target_alpha;

  // Reject the top round(alpha N) calibration values: tau is the order
  // statistic with that many values at or above it.
  const std::size_t total = calib.standardized_sorted.size();
  const auto reject = static_cast<std::size_t>(std::llround(target_alpha * static_cast<double>(total)));
  if (reject == 0) {
    t.tau = std::numeric_limits<double>::infinity();
  } else if (reject >= total) {
    t.tau = -std::numeric_limits<double>::infinity();
  } else {
    t.tau = calib.standardized_sorted[total - reject];
  }
  return t;
}

Outcome run_test(const CalibratedTest& test, const SquareMatrix& y) {
  if (test.kind != CalibratedTest::Kind::threshold) return test.decide(0.0);
  if (y.dim() != test.n) {
    fail(Errc::DimensionMismatch, "test calibrated for n=" + std::to_string(test.n) +
                                      ", observation has n=" + std::to_string(y.dim()));
  }
  return test.decide(lss_statistic(eigenvalues(y), test.lambda).value);
}

EmpiricalRoc empirical_roc(double lambda, std::size_t n, std::size_t trials,
                           std::span<const double> alpha_grid, const StreamKey& key,
                           const MonteCarloOptions& options) {
  if (trials < kMinCalibrationTrials) fail(Errc::InvalidArgument, "empirical_roc needs >= 100 trials");
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) fail(Errc::InvalidArgument, "alpha grid must lie in (0, 1)");
  }

  const double stat_lambda = options.statistic_lambda.value_or(lambda);
  EmpiricalRoc roc;
  roc.trials = trials;
  roc.calibration = calibrate_null(stat_lambda, n, trials, key.child("calibration"), options);
  const NullCalibration& calib = roc.calibration;

  const StreamKey null_key = key.child("null");
  const StreamKey alt_key = key.child("alternative");
  const std::vector<LssValue> null_h = parallel_map<LssValue>(trials, [&](std::size_t i) {
    Rng rng = null_key.stream(i);
    return sample_lss(0.0, stat_lambda, n, rng, options);
  });
  const std::vector<LssValue> alt_h = parallel_map<LssValue>(trials, [&](std::size_t i) {
    Rng rng = alt_key.stream(i);
    return sample_lss(lambda, stat_lambda, n, rng, options);
  });

  std::vector<double> z_null, z_alt;
  z_null.reserve(trials);
  z_alt.reserve(trials);
  double sum_null = 0.0, sum_alt = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    sum_null += null_h[i].value;
    sum_alt += alt_h[i].value;
    z_null.push_back((null_h[i].value - calib.mean) / calib.sd);
    z_alt.push_back((alt_h[i].value - calib.mean) / calib.sd);
    roc.clipped_trials += (null_h[i].clip_count > 0) + (alt_h[i].clip_count > 0);
  }
  roc.null_mean = sum_null / static_cast<double>(trials);
  roc.alt_mean = sum_alt / static_cast<double>(trials);
  roc.standardized_gap = (roc.alt_mean - calib.mean) / calib.sd;
  std::sort(z_null.begin(), z_null.end());
  std::sort(z_alt.begin(), z_alt.end());

  const auto denom = static_cast<double>(trials);
  for (double a : alpha_grid) {
    const CalibratedTest t = make_test(stat_lambda, n, a, calib);
    RocEstimate e;
    e.alpha_target = a;
    e.alpha_hat = static_cast<double>(count_at_or_above(z_null, t.tau)) / denom;
    e.beta_hat = static_cast<double>(count_at_or_above(z_alt, t.tau)) / denom;
    e.se_alpha = stats::binomial_stderr(e.alpha_hat, trials);
    e.se_beta = stats::binomial_stderr(e.beta_hat, trials);
    roc.points.push_back(e);
  }

  // Isotonic cleanup of beta in order of alpha_hat.
  std::sort(roc.points.begin(), roc.points.end(), [](const RocEstimate& x, const RocEstimate& y) {
    return x.alpha_hat < y.alpha_hat || (x.alpha_hat == y.alpha_hat && x.alpha_target < y.alpha_target);
  });
  std::vector<double> betas;
  for (const auto& e : roc.points) betas.push_back(e.beta_hat);
  const std::vector<double> fitted = stats::isotonic_fit(betas, {});
  for (std::size_t i = 0; i < roc.points.size(); ++i) roc.points[i].beta_hat = fitted[i];
  return roc;
}

TopEigenvalueSummary top_eigenvalue_diag(double lambda, std::size_t n, std::size_t trials,
                                         const StreamKey& key, const MonteCarloOptions& options) {
  if (trials < 10) fail(Errc::InvalidArgument, "top_eigenvalue_diag needs >= 10 trials");
  const std::vector<double> tops = parallel_map<double>(trials, [&](std::size_t i) {
    Rng rng = key.stream(i);
    if (options.route == SpectrumRoute::dense) {
      return eigenvalues(sample_spiked(options.prior, lambda, n, rng).observation()).top();
    }
    return tridiagonal_max_eigenvalue(sample_spiked_tridiagonal(options.prior, lambda, n, rng));
  });
  return {stats::mean(tops), stats::sample_sd(tops), trials};
}

double bbp_top_eigenvalue_limit(double lambda) { return lambda > 1.0 ? lambda + 1.0 / lambda : 2.0; }

}  // namespace swrl
