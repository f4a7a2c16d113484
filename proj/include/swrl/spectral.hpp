#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "swrl/linalg.hpp"
#include "swrl/prior.hpp"
#include "swrl/random.hpp"

namespace swrl {

/// Eigenvalues sorted descending.
struct Spectrum {
  std::vector<double> eigenvalues;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  double top() const { return eigenvalues.front(); }
};

Spectrum eigenvalues(const SquareMatrix& y);

/// Log arguments at or below this value are clipped and counted.
inline constexpr double kClipEpsilon = 1e-12;

struct LssValue {
  double value = 0.0;
  std::size_t clip_count = 0;
};

/// sum_i h(mu_i) with h(mu) = -log(1 - lambda mu + lambda^2), lambda in [0, 1).
LssValue lss_statistic(const Spectrum& spec, double lambda);

/// Same statistic for a tridiagonal matrix, evaluated as
/// -log det((1 + lambda^2) I - lambda T) from LDL^T pivots in O(n). Falls back
/// to the full spectrum when some eigenvalue needs clipping.
LssValue lss_statistic(const Tridiagonal& t, double lambda);

/// How Monte-Carlo loops produce spectra. `dense` builds Y and runs the full
/// symmetric eigensolver; `tridiagonal` samples the equal-in-law tridiagonal
/// model (see sample_spiked_tridiagonal), which is O(n) per statistic.
enum class SpectrumRoute { dense, tridiagonal };

struct MonteCarloOptions {
  SpikePrior prior = SpikePrior::rademacher();
  SpectrumRoute route = SpectrumRoute::tridiagonal;
  /// empirical_roc only: SNR inside h_lambda when it should differ from the
  /// model's (at lambda = 0 the statistic h_0 is identically zero).
  std::optional<double> statistic_lambda;
};

/// One draw of the LSS statistic (at stat_lambda) from the model with SNR
/// model_lambda (0 means the null).
LssValue sample_lss(double model_lambda, double stat_lambda, std::size_t n, Rng& rng,
                    const MonteCarloOptions& options = {});

/// Monte-Carlo null moments of the LSS statistic.
struct NullCalibration {
  double lambda = 0.0;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t trials = 0;
  std::vector<double> standardized_sorted;  // (H - mean) / sd, ascending
};

inline constexpr std::size_t kMinCalibrationTrials = 100;

NullCalibration calibrate_null(double lambda, std::size_t n, std::size_t calib_trials,
                               const StreamKey& key, const MonteCarloOptions& options = {});

enum class Outcome { q, p };

struct CalibratedTest {
  enum class Kind { always_q, always_p, threshold };

  Kind kind = Kind::threshold;
  double lambda = 0.0;
  std::size_t n = 0;
  double tau = 0.0;  // standardized units
  double null_mean = 0.0;
  double null_sd = 1.0;
  std::size_t calib_trials = 0;
  double target_alpha = 0.0;

  double standardize(double statistic) const { return (statistic - null_mean) / null_sd; }

  /// Decision from a precomputed raw LSS statistic.
  Outcome decide(double statistic) const;
};

/// Threshold at the (1 - alpha) empirical quantile of the standardized null
/// sample; alpha = 0 and alpha = 1 give the constant tests.
CalibratedTest make_test(double lambda, std::size_t n, double target_alpha,
                         const NullCalibration& calib);

CalibratedTest constant_test(Outcome outcome, double lambda, std::size_t n);

/// Runs the test on an observation; constant tests ignore y.
Outcome run_test(const CalibratedTest& test, const SquareMatrix& y);

struct RocEstimate {
  double alpha_target = 0.0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;  // after isotonic cleanup
  double se_alpha = 0.0;
  double se_beta = 0.0;
};

struct EmpiricalRoc {
  std::vector<RocEstimate> points;
  NullCalibration calibration;
  double null_mean = 0.0;         // fresh null trials, raw statistic
  double alt_mean = 0.0;          // fresh alternative trials, raw statistic
  double standardized_gap = 0.0;  // (alt_mean - calibration.mean) / calibration.sd
  std::size_t trials = 0;
  std::size_t clipped_trials = 0;  // trials with any clipped eigenvalue
};

/// Size and power of the calibrated LSS test at each alpha, from fresh
/// Monte-Carlo trials under the null and the alternative (trials per arm;
/// the calibration uses the same count).
EmpiricalRoc empirical_roc(double lambda, std::size_t n, std::size_t trials,
                           std::span<const double> alpha_grid, const StreamKey& key,
                           const MonteCarloOptions& options = {});

struct TopEigenvalueSummary {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t trials = 0;
};

/// Monte-Carlo mean of the top eigenvalue of Y under the model with SNR lambda.
TopEigenvalueSummary top_eigenvalue_diag(double lambda, std::size_t n, std::size_t trials,
                                         const StreamKey& key,
                                         const MonteCarloOptions& options = {});

/// lambda + 1/lambda above the transition, 2 at or below it.
double bbp_top_eigenvalue_limit(double lambda);

}  // namespace swrl
