#include "swrl/witness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swrl/errors.hpp"
#include "swrl/normal.hpp"
#include "swrl/parallel.hpp"
#include "swrl/stats.hpp"

namespace swrl {

bool SignPattern::monotone() const {
  return std::count_if(sigma.begin(), sigma.end(), [](int x) { return x != 0; }) <= 1;
}

SignPattern sign_pattern(std::span<const Outcome> s) {
  if (s.size() < 2 || s.front() != Outcome::q || s.back() != Outcome::p) {
    fail(Errc::MalformedOutcomes, "outcome sequence must start with q and end with p");
  }
  SignPattern out;
  out.s.assign(s.begin(), s.end());
  out.sigma.resize(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == Outcome::q && s[i + 1] == Outcome::p) {
      out.sigma[i] = 1;
    } else if (s[i] == Outcome::p && s[i + 1] == Outcome::q) {
      out.sigma[i] = -1;
    }
  }
  return out;
}

AltSumInterval altsum_interval(std::span<const int> sigma, std::span<const double> slopes) {
  if (sigma.size() != slopes.size()) fail(Errc::DimensionMismatch, "sigma and slopes differ in length");
  double lo = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    lo += sigma[i] * slopes[i];
    sq += sigma[i] * slopes[i] * slopes[i];
  }
  return {lo, std::sqrt(std::max(0.0, sq))};
}

// ------------------------------------------------------------- WitnessFn

WitnessFn::WitnessFn(RocPolyline v, WitnessChoice choice) : v_(std::move(v)), choice_(choice) {
  if (r() > kMaxTests) {
    fail(Errc::TooManyTests, "witness tables support at most 20 segments, got " + std::to_string(r()));
  }
  if (r() <= kMaterializeLimit) {
    const std::uint32_t patterns = 1U << (r() - 1);
    table_.resize(patterns);
    for (std::uint32_t bits = 0; bits < patterns; ++bits) table_[bits] = compute(bits);
  }
}

double WitnessFn::compute(std::uint32_t bits) const {
  const std::size_t segs = r();
  std::vector<int> sigma(segs, 0);
  auto outcome = [&](std::size_t i) {
    if (i == 0) return Outcome::q;
    if (i == segs) return Outcome::p;
    return ((bits >> (i - 1)) & 1U) ? Outcome::p : Outcome::q;
  };
  for (std::size_t i = 0; i < segs; ++i) {
    const Outcome a = outcome(i), b = outcome(i + 1);
    sigma[i] = (a == Outcome::q && b == Outcome::p) ? 1 : (a == Outcome::p && b == Outcome::q ? -1 : 0);
  }
  const AltSumInterval iv = altsum_interval(sigma, slopes());
  switch (choice_) {
    case WitnessChoice::lower: return std::max(0.0, iv.lo);
    case WitnessChoice::upper: return iv.hi;
    case WitnessChoice::midpoint: return 0.5 * (std::max(0.0, iv.lo) + iv.hi);
  }
  return iv.lo;
}

double WitnessFn::value_for_bits(std::uint32_t interior_bits) const {
  return table_.empty() ? compute(interior_bits) : table_[interior_bits];
}

double WitnessFn::operator()(std::span<const Outcome> s) const {
  if (s.size() != r() + 1) fail(Errc::MalformedOutcomes, "expected r + 1 outcomes");
  if (s.front() != Outcome::q || s.back() != Outcome::p) {
    fail(Errc::MalformedOutcomes, "outcome sequence must start with q and end with p");
  }
  std::uint32_t bits = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == Outcome::p) bits |= 1U << (i - 1);
  }
  return value_for_bits(bits);
}

WitnessFn build_witness(const RocPolyline& v, WitnessChoice choice) { return WitnessFn(v, choice); }

// ------------------------------------------------------------ evaluation

namespace {

struct TrialRecord {
  double f = 0.0;
  bool monotone = false;
  std::vector<Outcome> s;
};

std::vector<TrialRecord> run_arm(const WitnessFn& wfn, const TestBattery& battery, bool alternative,
                                 std::size_t trials, const StreamKey& key) {
  return parallel_map<TrialRecord>(trials, [&](std::size_t i) {
    Rng rng = key.stream(i);
    TrialRecord rec;
    rec.s.resize(wfn.r() + 1);
    battery(alternative, rng, rec.s);
    rec.monotone = sign_pattern(rec.s).monotone();
    rec.f = wfn(rec.s);
    return rec;
  });
}

}  // namespace

WitnessEvaluation evaluate_battery(const WitnessFn& wfn, const TestBattery& battery,
                                   std::size_t trials_per_arm, const StreamKey& key) {
  if (trials_per_arm == 0) fail(Errc::InvalidArgument, "need at least one trial per arm");
  const auto q_runs = run_arm(wfn, battery, false, trials_per_arm, key.child("null"));
  const auto p_runs = run_arm(wfn, battery, true, trials_per_arm, key.child("alternative"));

  WitnessEvaluation ev;
  ev.trials_per_arm = trials_per_arm;
  ev.val_conc_v = val_piecewise(wfn.polyline());
  const std::size_t tests = wfn.r() + 1;
  ev.achieved_alpha.assign(tests, 0.0);
  ev.achieved_beta.assign(tests, 0.0);

  std::vector<double> fq, fp;
  fq.reserve(trials_per_arm);
  fp.reserve(trials_per_arm);
  std::size_t monotone = 0;
  for (const auto& rec : q_runs) {
    fq.push_back(rec.f);
    monotone += rec.monotone;
    for (std::size_t i = 0; i < tests; ++i) ev.achieved_alpha[i] += rec.s[i] == Outcome::p;
  }
  for (const auto& rec : p_runs) {
    fp.push_back(rec.f);
    monotone += rec.monotone;
    for (std::size_t i = 0; i < tests; ++i) ev.achieved_beta[i] += rec.s[i] == Outcome::p;
  }
  const auto denom = static_cast<double>(trials_per_arm);
  for (std::size_t i = 0; i < tests; ++i) {
    ev.achieved_alpha[i] /= denom;
    ev.achieved_beta[i] /= denom;
  }
  ev.monotone_fraction = static_cast<double>(monotone) / (2.0 * denom);
  ev.r_hat = ratio_estimate(fp, fq);
  ev.mean_f_p = stats::mean(fp);
  double sq = 0.0;
  for (double f : fq) sq += f * f;
  ev.mean_f_sq_q = sq / denom;
  return ev;
}

WitnessEvaluation evaluate_witness(const WitnessFn& wfn, std::span<const CalibratedTest> tests,
                                   double lambda, std::size_t n, std::size_t trials_per_arm,
                                   const StreamKey& key, const MonteCarloOptions& options) {
  if (tests.size() != wfn.r() + 1) {
    fail(Errc::InvalidArgument, "need exactly r + 1 tests for the witness table");
  }
  if (tests.front().kind != CalibratedTest::Kind::always_q ||
      tests.back().kind != CalibratedTest::Kind::always_p) {
    fail(Errc::InvalidArgument, "tests 0 and r must be the constant q and p tests");
  }
  for (const CalibratedTest& t : tests) {
    if (t.kind == CalibratedTest::Kind::threshold && (t.n != n || t.lambda != lambda)) {
      fail(Errc::DimensionMismatch, "all tests must be calibrated for the same (lambda, n)");
    }
  }
  // Every interior test thresholds the same LSS statistic, so one draw of it
  // decides them all.
  TestBattery battery = [&](bool alternative, Rng& rng, std::span<Outcome> out) {
    const double h = sample_lss(alternative ? lambda : 0.0, lambda, n, rng, options).value;
    for (std::size_t i = 0; i < tests.size(); ++i) out[i] = tests[i].decide(h);
  };
  return evaluate_battery(wfn, battery, trials_per_arm, key);
}

TestBattery oracle_battery(const RocPolyline& v, OracleCoupling coupling) {
  std::vector<RocPoint> pts = v.points();
  return [pts, coupling](bool alternative, Rng& rng, std::span<Outcome> out) {
    const double shared = rng.uniform();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double level = alternative ? pts[i].beta : pts[i].alpha;
      const double u = coupling == OracleCoupling::nested ? shared : rng.uniform();
      out[i] = u < level ? Outcome::p : Outcome::q;
    }
    out.front() = Outcome::q;
    out.back() = Outcome::p;
  };
}

LiveBattery live_lss_battery(double lambda, std::size_t n, std::span<const double> interior_alphas,
                             double perturb_gamma, std::size_t calib_trials, const StreamKey& key,
                             const MonteCarloOptions& options) {
  const LssRocCurve curve(lambda);
  RocPolyline v = perturb_points(inscribed_polyline(curve, interior_alphas), perturb_gamma);
  NullCalibration calib = calibrate_null(lambda, n, calib_trials, key.child("calibration"), options);

  std::vector<CalibratedTest> tests;
  tests.push_back(constant_test(Outcome::q, lambda, n));
  for (double a : interior_alphas) tests.push_back(make_test(lambda, n, a, calib));
  tests.push_back(constant_test(Outcome::p, lambda, n));
  return LiveBattery{std::move(v), std::move(tests), std::move(calib)};
}

std::vector<double> default_interior_alphas(double lambda, std::size_t r) {
  if (r < 2) return {};
  const LssRocCurve curve(lambda);
  const double t_first = curve.threshold_of_alpha(0.01);
  const double t_last = curve.threshold_of_alpha(0.90);
  std::vector<double> out;
  const std::size_t count = r - 1;
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = count == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(curve.alpha_of_threshold(t_first + frac * (t_last - t_first)));
  }
  return out;
}

}  // namespace swrl
