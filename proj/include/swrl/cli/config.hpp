#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swrl/lowdeg.hpp"
#include "swrl/prior.hpp"
#include "swrl/roc.hpp"
#include "swrl/spectral.hpp"
#include "swrl/witness.hpp"

namespace swrl::cli {

enum class Subcommand { roc, lowdeg_norm, envelope, witness, diag };

std::string_view subcommand_name(Subcommand sub);
std::optional<Subcommand> parse_subcommand(std::string_view name);

enum class WitnessMode { live, oracle };

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::roc;
  double lambda = 0.6;
  std::size_t n = 1000;
  SpikePrior prior = SpikePrior::rademacher();
  std::size_t trials = 2000;
  std::optional<Degree> degree;
  std::optional<std::vector<double>> alpha_grid;
  std::optional<RocPoint> exterior;
  std::optional<std::uint64_t> seed;
  std::string output;  // empty: <subcommand>.csv or .json in the working directory

  NormMethod method = NormMethod::binomial_sum;
  std::size_t r = 6;
  WitnessChoice choice = WitnessChoice::lower;
  WitnessMode mode = WitnessMode::live;
  std::optional<std::size_t> calib_trials;  // defaults to trials
  SpectrumRoute route = SpectrumRoute::tridiagonal;
  std::optional<double> envelope_eps;  // defaults to val(psi)^2 - val(phi)^2
  double discretize_gamma = kDefaultDiscretizeGamma;
  double perturb_gamma = kDefaultPerturbGamma;
  std::size_t overlap_draws = 100000;
  int threads = 0;  // 0: SWRL_THREADS or the hardware concurrency

  std::vector<double> effective_alpha_grid() const;
  RocPoint effective_exterior() const;
  Degree effective_degree() const;
  std::string effective_output() const;
};

inline constexpr double kMaxLambda = 5.0;
inline constexpr std::size_t kMinDim = 2;
inline constexpr std::size_t kMaxDim = 10000;
inline constexpr std::size_t kMinTrials = 100;
inline constexpr std::size_t kMaxTrials = 10'000'000;

/// Throws Error(UsageError) naming the offending field.
void validate(const ExperimentConfig& config);

/// Applies the fields present in a JSON object onto config. Unknown keys are
/// usage errors.
void apply_json(ExperimentConfig& config, const nlohmann::json& j);

/// Canonical echo used in manifests and for the config digest.
nlohmann::json to_json(const ExperimentConfig& config);

SpikePrior parse_prior(std::string_view text);
Degree parse_degree(std::string_view text);
NormMethod parse_method(std::string_view text);

/// Parses `<subcommand> [flags]`; a `--config file.json` is applied first and
/// flags override it. Returns nullopt after printing help to `out`.
std::optional<ExperimentConfig> parse_config(const std::vector<std::string>& args,
                                             std::ostream& out);

}  // namespace swrl::cli
