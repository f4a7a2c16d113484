// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "swrl/errors.hpp"
#include "swrl/lowdeg.hpp"
#include "swrl/roc.hpp"
#include "swrl/spectral.hpp"
#include "swrl/witness.hpp"

using namespace swrl;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mu_of(double lambda) { return -std::log(1.0 - lambda * lambda); }

Verdict second_moment_limit() {
  const auto t0 = std::chrono::steady_clock::now();
  const double value = ldr_norm_exact_rademacher(4000, 0.5, Degree::infinite()).value;
  const double elapsed = seconds_since(t0);
  const double target = 1.0 / std::sqrt(1.0 - 0.25);
  const double rel = std::abs(value / target - 1.0);
  return {rel <= 0.02 && elapsed < 5.0,
          fmt("value=%.6f target=%.6f rel_err=%.2e (<= 0.02) time=%.3fs (< 5s)", value, target, rel, elapsed)};
}

Verdict low_degree_norm() {
  const double target = 1.0 / std::sqrt(1.0 - 0.25);
  bool ok = true;
  std::string seq;
  double prev_gap = INFINITY, prev_value = 0.0;
  for (std::size_t n : {500UL, 1000UL, 2000UL, 4000UL}) {
    const auto d = static_cast<unsigned>(std::ceil(std::log(static_cast<double>(n))));
    const double v = ldr_norm_exact_rademacher(n, 0.5, Degree(d)).value;
    const double gap = std::abs(target - v);
    ok &= v >= 1.0 && v <= 1.178 && gap <= prev_gap && v >= prev_value;
    prev_gap = gap;
    prev_value = v;
    seq += fmt("n=%zu,D=%u:%.5f ", n, d, v);
  }

  // Monotonicity in D and in lambda on random (n, lambda, D).
  Rng rng(StreamKey(20240601, "monotone").stream(0));
  std::size_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 4999);
    const double lambda = 0.99 * rng.uniform();
    const unsigned d = 1 + static_cast<unsigned>(rng.uniform() * 40);
    const double dl = 0.01 * (1.0 - lambda) * rng.uniform() + 1e-6;
    const double base = ldr_norm_exact_rademacher(n, lambda, Degree(d)).value;
    violations += ldr_norm_exact_rademacher(n, lambda, Degree(d + 1)).value < base;
    violations += ldr_norm_exact_rademacher(n, lambda, Degree::infinite()).value < base;
    violations += ldr_norm_exact_rademacher(n, lambda + dl, Degree(d)).value < base;
  }
  ok &= violations == 0;
  return {ok, seq + fmt("in [1, 1.178], approaching %.4f; monotonicity violations=%zu/3000", target, violations)};
}

Verdict oracle_equivalence() {
  bool ok = true;
  double worst = 0.0;
  const StreamKey key(20240602, "oracle");
  for (std::size_t n : {2UL, 3UL, 4UL}) {
    for (double lambda : {0.3, 0.5, 0.8}) {
      for (Degree d : {Degree(1), Degree(2), Degree::infinite()}) {
        const double exact = ldr_norm_exact_enum(SpikePrior::rademacher(), n, lambda, d).value;
        const NormEstimate mc = ldr_norm_mc(SpikePrior::rademacher(), n, lambda, d, 200000,
                                            key.child(fmt("%zu/%g/%s", n, lambda, d.to_string().c_str())));
        const double z = std::abs(mc.value - exact) / mc.std_error;
        worst = std::max(worst, z);
        ok &= z <= 3.0;
      }
    }
  }
  const double anchor = ldr_norm_exact_enum(SpikePrior::rademacher(), 2, 0.5, Degree::infinite()).value;
  ok &= std::abs(anchor - (0.5 + 0.5 * std::exp(0.25))) < 1e-12;
  return {ok, fmt("27 cells, worst |mc - enum| = %.2f stderr (<= 3); enum(n=2, 0.5, inf) = %.6f", worst, anchor)};
}

Verdict val_matching() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  for (double lambda : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95}) {
    const double numeric = val_numeric(LssRocCurve(lambda));
    const double closed = val_closed_form(lambda);
    const double limit = ldr_norm_limit(lambda);
    const double d = std::max({std::abs(numeric - closed), std::abs(numeric - limit), std::abs(closed - limit)});
    worst = std::max(worst, d);
    ok &= d <= 1e-3;
  }
  const double elapsed = seconds_since(t0);
  return {ok && elapsed < 1.0, fmt("max pairwise gap = %.2e (<= 1e-3) time=%.3fs (< 1s)", worst, elapsed)};
}

Verdict lss_roc() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  const EmpiricalRoc roc = empirical_roc(0.6, 1000, 2000, grid, StreamKey(20240605, "roc"));
  double sup = 0.0;
  for (const RocEstimate& e : roc.points) {
    sup = std::max(sup, std::abs(e.beta_hat - phi_eval(0.6, e.alpha_target)));
    sup = std::max(sup, std::abs(e.beta_hat - phi_eval(0.6, e.alpha_hat)));
  }
  const double target_gap = std::sqrt(mu_of(0.6) / 2.0);
  const double rel = std::abs(roc.standardized_gap / target_gap - 1.0);
  return {sup <= 0.05 && rel <= 0.10,
          fmt("sup |beta_hat - phi| = %.4f (<= 0.05); standardized gap = %.4f vs %.4f, rel_err=%.3f (<= 0.10)",
              sup, roc.standardized_gap, target_gap, rel)};
}

Verdict envelope_chain() {
  const double margin = kMarginFactor * kQuadratureTolerance;
  const LssRocCurve phi(0.6);
  const EnvelopeCurve env = upper_concave_envelope(0.6, {0.3, 0.9});
  const PushoutResult push = pushout_check(env);
  const Discretization disc = discretize_envelope(env, push.gap_sq, kDefaultDiscretizeGamma);
  const RocPolyline v = perturb_points(disc.u, kDefaultPerturbGamma);

  const double psi2 = push.val_psi * push.val_psi;
  const double phi2 = val_numeric(phi) * val_numeric(phi);
  const double u2 = std::pow(val_piecewise(disc.u), 2);
  const double v2 = std::pow(val_piecewise(v), 2);

  std::vector<double> grid;
  for (int i = 1; i < 50; ++i) grid.push_back(i / 50.0);
  // psi is linear on [A1, A2]; its vertices are the strictly concave pieces plus both tangency points.
  std::vector<RocPoint> psi_vertices = {{0.0, 0.0}};
  for (double a : grid) {
    if (a < env.a1()) psi_vertices.push_back({a, env.value(a)});
  }
  psi_vertices.push_back({env.a1(), env.value(env.a1())});
  psi_vertices.push_back({env.a2(), env.value(env.a2())});
  for (double a : grid) {
    if (a > env.a2()) psi_vertices.push_back({a, env.value(a)});
  }
  psi_vertices.push_back({1.0, 1.0});
  const bool concave = concave_position_check(inscribed_polyline(phi, grid).points()) &&
                       concave_position_check(psi_vertices) &&
                       concave_position_check(disc.u.points()) && concave_position_check(v.points());
  const bool ok = psi2 - u2 >= margin && u2 - phi2 >= margin && v2 - phi2 >= margin && concave;
  return {ok, fmt("val: psi=%.5f u=%.5f v=%.5f phi=%.5f; squared gaps psi-u=%.2e u-phi=%.3f v-phi=%.3f "
                  "(each >= %.0e); concave position at every stage: %s",
                  std::sqrt(psi2), std::sqrt(u2), std::sqrt(v2), std::sqrt(phi2), psi2 - u2, u2 - phi2,
                  v2 - phi2, margin, concave ? "yes" : "no")};
}

Verdict witness_saturation() {
  const double lambda = 0.6;
  const std::size_t n = 1000, r = 6;
  const auto alphas = default_interior_alphas(lambda, r);
  const StreamKey key(20240607, "witness");

  const RocPolyline v_oracle = perturb_points(inscribed_polyline(LssRocCurve(lambda), alphas), kDefaultPerturbGamma);
  const WitnessEvaluation oracle = evaluate_battery(
      build_witness(v_oracle), oracle_battery(v_oracle, OracleCoupling::nested), 1000000, key.child("oracle"));
  const double z = std::abs(oracle.r_hat.value - oracle.val_conc_v) / oracle.r_hat.std_error;

  const LiveBattery live = live_lss_battery(lambda, n, alphas, kDefaultPerturbGamma, 4000, key.child("live"));
  const WitnessEvaluation ev =
      evaluate_witness(build_witness(live.v), live.tests, lambda, n, 4000, key.child("live-eval"));
  const double lo = ev.val_conc_v - 0.05;
  const double hi = ldr_norm_limit(lambda) + 0.05;
  const bool ok = z <= 3.0 && ev.r_hat.value >= lo && ev.r_hat.value <= hi;
  return {ok, fmt("oracle R=%.5f vs val(conc v)=%.5f, %.2f stderr (<= 3); live R=%.4f +- %.4f in [%.4f, %.4f], "
                  "monotone=%.4f",
                  oracle.r_hat.value, oracle.val_conc_v, z, ev.r_hat.value, ev.r_hat.std_error, lo, hi,
                  ev.monotone_fraction)};
}

Verdict alternating_sums() {
  Rng rng(StreamKey(20240608, "altsum").stream(0));
  std::size_t bad = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t len = 1 + static_cast<std::size_t>(rng.uniform() * 20);
    std::vector<double> h(len);
    double x = std::exp(8.0 * rng.uniform() - 2.0);
    for (double& v : h) {
      v = x;
      x *= rng.uniform();
      if (x <= 0.0) x = 1e-300;
    }
    std::vector<int> sigma(len);
    for (std::size_t i = 0; i < len; ++i) sigma[i] = i % 2 == 0 ? 1 : -1;
    const AltSumInterval iv = altsum_interval(sigma, h);
    bad += !(iv.lo >= 0.0 && iv.lo <= iv.hi);
  }
  return {bad == 0, fmt("10000 sequences, violations=%zu", bad)};
}

Verdict feasibility() {
  bool ok = true;
  std::size_t checked = 0, failed = 0;
  for (double lambda : {0.3, 0.6, 0.9}) {
    const double bound = 1.0 / std::sqrt(1.0 - lambda * lambda);
    for (int i = 1; i < 100; ++i) {
      const double a = i / 100.0;
      const double phi = phi_eval(lambda, a);
      std::vector<double> betas;
      for (double t : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999}) betas.push_back(a + t * (phi - a));
      betas.push_back(phi - 1e-9);
      for (double b : betas) {
        if (!(b < phi) || !(b > 0.0) || !(b < 1.0)) continue;
        ++checked;
        if (!feasibility_bound_check({a, b}, bound)) ++failed;
      }
    }
  }
  ok = failed == 0;
  const bool violator_rejected = !feasibility_bound_check({0.1, 0.9}, 1.25);
  const double lhs = 0.81 / 0.1 + 0.01 / 0.9;
  return {ok && violator_rejected,
          fmt("%zu grid points below phi, %zu rejected; (0.1, 0.9) vs 1.25: LHS=%.4f %s", checked, failed, lhs,
              violator_rejected ? "rejected" : "ACCEPTED")};
}

Verdict spectral_diagnostics() {
  const StreamKey key(20240610, "diag");
  const auto low = top_eigenvalue_diag(0.5, 2000, 20, key.child("low"));
  const auto high = top_eigenvalue_diag(1.5, 2000, 20, key.child("high"));
  const double target_high = 1.5 + 1.0 / 1.5;
  const double rel_low = std::abs(low.mean / 2.0 - 1.0);
  const double rel_high = std::abs(high.mean / target_high - 1.0);
  const auto a = sample_overlap_statistics(SpikePrior::rademacher(), 2000, 0.6, 100000, key.child("overlap"));
  const double ks = overlap_ks_distance(a, 0.6);
  return {rel_low <= 0.05 && rel_high <= 0.05 && ks <= 0.02,
          fmt("top eig lambda=0.5: %.4f vs 2 (rel %.3f); lambda=1.5: %.4f vs %.4f (rel %.3f); overlap KS=%.4f "
              "(<= 0.02)",
              low.mean, rel_low, high.mean, target_high, rel_high, ks)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 second-moment limit", second_moment_limit},
      {"2 low-degree norm", low_degree_norm},
      {"3 oracle equivalence", oracle_equivalence},
      {"4 val matching", val_matching},
      {"5 LSS ROC", lss_roc},
      {"6 envelope chain", envelope_chain},
      {"7 witness saturation", witness_saturation},
      {"8 alternating-sum property", alternating_sums},
      {"9 feasibility bound", feasibility},
      {"10 spectral diagnostics", spectral_diagnostics},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const Error& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
