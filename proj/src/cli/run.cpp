#include "swrl/cli/run.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include "swrl/cli/format.hpp"
#include "swrl/cli/manifest.hpp"
#include "swrl/errors.hpp"
#include "swrl/parallel.hpp"
#include "swrl/simd/kernels.hpp"

#ifndef SWRL_VERSION
#define SWRL_VERSION "0.0.0"
#endif

namespace swrl::cli {

namespace {

using nlohmann::json;

json points_json(const RocPolyline& poly) {
  json arr = json::array();
  for (const RocPoint& p : poly.points()) arr.push_back({p.alpha, p.beta});
  return arr;
}

std::string render_roc(const ExperimentConfig& c) {
  const MonteCarloOptions opts{c.prior, c.route};
  const auto grid = c.effective_alpha_grid();
  const EmpiricalRoc roc =
      empirical_roc(c.lambda, c.n, c.trials, grid, StreamKey(*c.seed, "roc"), opts);
  std::ostringstream out;
  out << "alpha_target,alpha_hat,beta_hat,se_alpha,se_beta,phi_lambda_alpha\n";
  for (const RocEstimate& e : roc.points) {
    out << format_double(e.alpha_target) << ',' << format_double(e.alpha_hat) << ','
        << format_double(e.beta_hat) << ',' << format_double(e.se_alpha) << ','
        << format_double(e.se_beta) << ',' << format_double(phi_eval(c.lambda, e.alpha_target))
        << '\n';
  }
  return out.str();
}

std::string render_lowdeg(const ExperimentConfig& c) {
  const Degree d = c.effective_degree();
  NormEstimate est;
  switch (c.method) {
    case NormMethod::binomial_sum: est = ldr_norm_exact_rademacher(c.n, c.lambda, d); break;
    case NormMethod::exact_enum: est = ldr_norm_exact_enum(c.prior, c.n, c.lambda, d); break;
    case NormMethod::monte_carlo:
      est = ldr_norm_mc(c.prior, c.n, c.lambda, d, c.trials, StreamKey(*c.seed, "lowdeg-norm"));
      break;
    case NormMethod::ratio: fail(Errc::UsageError, "method: ratio is not a norm method");
  }
  // value is the squared norm, so the limit is reported squared as well.
  const double limit = ldr_norm_limit(c.lambda);
  std::ostringstream out;
  out << "n,lambda,D,method,value,stderr,limit_value\n";
  out << c.n << ',' << format_double(c.lambda) << ',' << d.to_string() << ','
      << method_name(est.method) << ',' << format_double(est.value) << ','
      << format_double(est.std_error) << ',' << format_double(limit * limit) << '\n';
  return out.str();
}

std::string render_envelope(const ExperimentConfig& c) {
  const EnvelopeCurve env = upper_concave_envelope(c.lambda, c.effective_exterior());
  const PushoutResult push = pushout_check(env);
  const Discretization disc = discretize_envelope(env, c.envelope_eps.value_or(push.gap_sq), c.discretize_gamma);
  const RocPolyline v = perturb_points(disc.u, c.perturb_gamma);
  json j;
  j["A1"] = env.a1();
  j["A2"] = env.a2();
  j["val_phi"] = push.val_phi;
  j["val_psi"] = push.val_psi;
  j["val_conc_u"] = val_piecewise(disc.u);
  j["val_conc_v"] = val_piecewise(v);
  j["points_u"] = points_json(disc.u);
  j["points_v"] = points_json(v);
  return j.dump(2) + "\n";
}

std::string render_witness(const ExperimentConfig& c) {
  const StreamKey key(*c.seed, "witness");
  const MonteCarloOptions opts{c.prior, c.route};
  const auto alphas = default_interior_alphas(c.lambda, c.r);
  WitnessEvaluation ev;
  if (c.mode == WitnessMode::live) {
    const LiveBattery battery = live_lss_battery(c.lambda, c.n, alphas, c.perturb_gamma,
                                                 c.calib_trials.value_or(c.trials), key, opts);
    const WitnessFn wfn = build_witness(battery.v, c.choice);
    ev = evaluate_witness(wfn, battery.tests, c.lambda, c.n, c.trials, key.child("evaluate"), opts);
  } else {
    const LssRocCurve curve(c.lambda);
    const RocPolyline v = perturb_points(inscribed_polyline(curve, alphas), c.perturb_gamma);
    const WitnessFn wfn = build_witness(v, c.choice);
    ev = evaluate_battery(wfn, oracle_battery(v, OracleCoupling::nested), c.trials,
                          key.child("evaluate"));
  }
  json j;
  j["lambda"] = c.lambda;
  j["n"] = c.n;
  j["r"] = c.r;
  j["val_conc_v"] = ev.val_conc_v;
  j["R_hat"] = ev.r_hat.value;
  j["R_stderr"] = ev.r_hat.std_error;
  j["limit"] = ldr_norm_limit(c.lambda);
  j["monotone_fraction"] = ev.monotone_fraction;
  return j.dump(2) + "\n";
}

std::string render_diag(const ExperimentConfig& c) {
  const StreamKey key(*c.seed, "diag");
  const MonteCarloOptions opts{c.prior, c.route};
  const TopEigenvalueSummary top = top_eigenvalue_diag(c.lambda, c.n, c.trials, key.child("top"), opts);
  const auto overlaps =
      sample_overlap_statistics(c.prior, c.n, c.lambda, c.overlap_draws, key.child("overlap"));
  const double limit = bbp_top_eigenvalue_limit(c.lambda);
  json j;
  j["lambda"] = c.lambda;
  j["n"] = c.n;
  j["trials"] = top.trials;
  j["top_eigenvalue_mean"] = top.mean;
  j["top_eigenvalue_sd"] = top.sd;
  j["bbp_limit"] = limit;
  j["relative_error"] = std::abs(top.mean - limit) / limit;
  j["overlap_draws"] = c.overlap_draws;
  j["overlap_ks_distance"] = c.lambda > 0.0 ? overlap_ks_distance(overlaps, c.lambda) : 0.0;
  return j.dump(2) + "\n";
}

json tolerances() {
  return {
      {"prior_moment_tolerance", kPriorTolerance},
      {"lss_clip_epsilon", kClipEpsilon},
      {"quadrature_tolerance", kQuadratureTolerance},
      {"margin_factor", kMarginFactor},
      {"min_calibration_trials", kMinCalibrationTrials},
      {"min_norm_trials", kMinNormTrials},
      {"jackknife_blocks", kJackknifeBlocks},
  };
}

}  // namespace

std::string render(const ExperimentConfig& c) {
  validate(c);
  switch (c.subcommand) {
    case Subcommand::roc: return render_roc(c);
    case Subcommand::lowdeg_norm: return render_lowdeg(c);
    case Subcommand::envelope: return render_envelope(c);
    case Subcommand::witness: return render_witness(c);
    case Subcommand::diag: return render_diag(c);
  }
  fail(Errc::UsageError, "subcommand: unknown");
}

int run(const ExperimentConfig& config, std::ostream& log) {
  if (config.threads > 0) set_worker_count(config.threads);
  const auto start = std::chrono::steady_clock::now();

  RunManifest manifest;
  manifest.config = to_json(config);
  manifest.config_sha256 = sha256_hex(manifest.config.dump());
  manifest.tool_version = SWRL_VERSION;
  manifest.threads = worker_count();
  manifest.simd_level = std::string(simd::level_name(simd::kernels().level));
  manifest.tolerances = tolerances();

  const std::filesystem::path output = config.effective_output();
  int code = kExitOk;
  try {
    const std::string text = render(config);
    write_file(output, text);
    manifest.outputs.push_back({output.string(), sha256_hex(text), text.size()});
  } catch (const Error& e) {
    code = is_numerical_guard(e.code()) ? kExitNumerical : kExitUsage;
    manifest.error = e.what();
    log << "swrl: " << manifest.error << '\n';
  }
  manifest.exit_code = code;
  manifest.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(manifest_path_for(output), manifest.to_json().dump(2) + "\n");
  return code;
}

int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
  try {
    const auto config = parse_config(args, out);
    if (!config) return kExitOk;
    return run(*config, log);
  } catch (const Error& e) {
    log << "swrl: " << e.what() << '\n';
    return is_numerical_guard(e.code()) ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    log << "swrl: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace swrl::cli
