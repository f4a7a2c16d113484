#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "swrl/lowdeg.hpp"
#include "swrl/random.hpp"
#include "swrl/roc.hpp"
#include "swrl/spectral.hpp"

namespace swrl {

/// sigma_i = +1 for (q, p) at positions (i, i+1), -1 for (p, q), 0 otherwise.
struct SignPattern {
  std::vector<Outcome> s;
  std::vector<int> sigma;

  bool monotone() const;  // at most one nonzero sigma
};

/// Throws MalformedOutcomes unless s starts with q and ends with p.
SignPattern sign_pattern(std::span<const Outcome> s);

struct AltSumInterval {
  double lo = 0.0;  // sum sigma_i l_i
  double hi = 0.0;  // sqrt(sum sigma_i l_i^2)
};

/// For positive decreasing slopes and nonzero sigmas alternating from +1,
/// 0 <= lo <= hi.
AltSumInterval altsum_interval(std::span<const int> sigma, std::span<const double> slopes);

enum class WitnessChoice { lower, upper, midpoint };

/// Lookup table from test-outcome patterns to f(s) in the alternating-sum
/// interval. Interior outcomes s_1..s_{r-1} are encoded as bits (bit i-1 set
/// when s_i = p).
class WitnessFn {
 public:
  static constexpr std::size_t kMaxTests = 20;
  static constexpr std::size_t kMaterializeLimit = 12;

  WitnessFn(RocPolyline v, WitnessChoice choice);

  std::size_t r() const noexcept { return v_.segments(); }
  const RocPolyline& polyline() const noexcept { return v_; }
  const std::vector<double>& slopes() const noexcept { return v_.slopes(); }
  WitnessChoice choice() const noexcept { return choice_; }

  double operator()(std::span<const Outcome> s) const;
  double value_for_bits(std::uint32_t interior_bits) const;

  /// Patterns stored up front (0 when entries are computed per lookup).
  std::size_t materialized_entries() const noexcept { return table_.size(); }

 private:
  double compute(std::uint32_t interior_bits) const;

  RocPolyline v_;
  WitnessChoice choice_;
  std::vector<double> table_;
};

/// Throws TooManyTests when v has more than 20 segments.
WitnessFn build_witness(const RocPolyline& v, WitnessChoice choice = WitnessChoice::lower);

/// Fills out[0..r] with the outcomes of all r+1 tests on one fresh draw from
/// the alternative (true) or the null (false).
using TestBattery = std::function<void(bool under_alternative, Rng& rng, std::span<Outcome> out)>;

struct WitnessEvaluation {
  NormEstimate r_hat;
  double val_conc_v = 0.0;
  double mean_f_p = 0.0;     // E_P[f]
  double mean_f_sq_q = 0.0;  // E_Q[f^2]
  double monotone_fraction = 0.0;
  std::vector<double> achieved_alpha;  // per test, Q(s_i = p)
  std::vector<double> achieved_beta;   // per test, P(s_i = p)
  std::size_t trials_per_arm = 0;
};

WitnessEvaluation evaluate_battery(const WitnessFn& wfn, const TestBattery& battery,
                                   std::size_t trials_per_arm, const StreamKey& key);

/// Live evaluation: tests[0] and tests[r] must be the constant q and p tests,
/// all thresholds calibrated for the same (lambda, n).
WitnessEvaluation evaluate_witness(const WitnessFn& wfn, std::span<const CalibratedTest> tests,
                                   double lambda, std::size_t n, std::size_t trials_per_arm,
                                   const StreamKey& key, const MonteCarloOptions& options = {});

/// Idealized batteries with exact marginals Q(s_i = p) = a_i, P(s_i = p) = b_i.
/// `nested` drives every test from one uniform variable; `independent` gives
/// each test its own coin, producing non-monotone patterns.
enum class OracleCoupling { nested, independent };

TestBattery oracle_battery(const RocPolyline& v, OracleCoupling coupling);

/// Tests for a live run: v lies just below phi_lambda at the given interior
/// alphas (inscribed polyline pushed down by perturb_points), and test i is
/// the LSS test calibrated to size a_i.
struct LiveBattery {
  RocPolyline v;
  std::vector<CalibratedTest> tests;
  NullCalibration calibration;
};

LiveBattery live_lss_battery(double lambda, std::size_t n, std::span<const double> interior_alphas,
                             double perturb_gamma, std::size_t calib_trials, const StreamKey& key,
                             const MonteCarloOptions& options = {});

/// r - 1 interior sizes spread evenly in the LSS threshold between the
/// 1% and 90% size levels.
std::vector<double> default_interior_alphas(double lambda, std::size_t r);

}  // namespace swrl
