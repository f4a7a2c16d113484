#include "swrl/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "swrl/cli/format.hpp"
#include "swrl/errors.hpp"

namespace swrl::cli {

namespace {

[[noreturn]] void usage(std::string_view field, const std::string& what) {
  fail(Errc::UsageError, std::string(field) + ": " + what);
}

double to_double(std::string_view field, std::string_view text) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
    usage(field, "expected a finite number, got '" + std::string(text) + "'");
  }
  return x;
}

std::uint64_t to_u64(std::string_view field, std::string_view text) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    usage(field, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return x;
}

std::vector<double> to_list(std::string_view field, std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    out.push_back(to_double(field, item));
    start = end + 1;
  }
  return out;
}

// JSON scalars and arrays are converted to the same text the flags accept.
std::string json_text(std::string_view field, const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  if (j.is_number_float()) return format_double(j.get<double>());
  if (j.is_array()) {
    std::string out;
    for (const auto& item : j) {
      if (!out.empty()) out += ',';
      out += json_text(field, item);
    }
    return out;
  }
  if (j.is_object()) return j.dump();
  usage(field, "unsupported JSON value");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"subcommand",
       [](ExperimentConfig& c, const std::string& v) {
         auto sub = parse_subcommand(v);
         if (!sub) usage("subcommand", "unknown subcommand '" + v + "'");
         c.subcommand = *sub;
       }},
      {"lambda", [](ExperimentConfig& c, const std::string& v) { c.lambda = to_double("lambda", v); }},
      {"n", [](ExperimentConfig& c, const std::string& v) { c.n = to_u64("n", v); }},
      {"prior", [](ExperimentConfig& c, const std::string& v) { c.prior = parse_prior(v); }},
      {"trials", [](ExperimentConfig& c, const std::string& v) { c.trials = to_u64("trials", v); }},
      {"degree", [](ExperimentConfig& c, const std::string& v) { c.degree = parse_degree(v); }},
      {"alpha_grid",
       [](ExperimentConfig& c, const std::string& v) { c.alpha_grid = to_list("alpha_grid", v); }},
      {"exterior",
       [](ExperimentConfig& c, const std::string& v) {
         const auto xy = to_list("exterior", v);
         if (xy.size() != 2) usage("exterior", "expected two numbers 'alpha,beta'");
         c.exterior = RocPoint{xy[0], xy[1]};
       }},
      {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = to_u64("seed", v); }},
      {"output", [](ExperimentConfig& c, const std::string& v) { c.output = v; }},
      {"method", [](ExperimentConfig& c, const std::string& v) { c.method = parse_method(v); }},
      {"r", [](ExperimentConfig& c, const std::string& v) { c.r = to_u64("r", v); }},
      {"choice",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "lower") c.choice = WitnessChoice::lower;
         else if (v == "upper") c.choice = WitnessChoice::upper;
         else if (v == "midpoint") c.choice = WitnessChoice::midpoint;
         else usage("choice", "expected lower, upper or midpoint");
       }},
      {"mode",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "live") c.mode = WitnessMode::live;
         else if (v == "oracle") c.mode = WitnessMode::oracle;
         else usage("mode", "expected live or oracle");
       }},
      {"calib_trials",
       [](ExperimentConfig& c, const std::string& v) { c.calib_trials = to_u64("calib_trials", v); }},
      {"route",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "tridiagonal") c.route = SpectrumRoute::tridiagonal;
         else if (v == "dense") c.route = SpectrumRoute::dense;
         else usage("route", "expected tridiagonal or dense");
       }},
      {"eps",
       [](ExperimentConfig& c, const std::string& v) {
         if (v != "auto") c.envelope_eps = to_double("eps", v);
       }},
      {"discretize_gamma",
       [](ExperimentConfig& c, const std::string& v) {
         c.discretize_gamma = to_double("discretize_gamma", v);
       }},
      {"perturb_gamma",
       [](ExperimentConfig& c, const std::string& v) { c.perturb_gamma = to_double("perturb_gamma", v); }},
      {"overlap_draws",
       [](ExperimentConfig& c, const std::string& v) { c.overlap_draws = to_u64("overlap_draws", v); }},
      {"threads",
       [](ExperimentConfig& c, const std::string& v) {
         const auto t = to_u64("threads", v);
         if (t > 4096) usage("threads", "at most 4096");
         c.threads = static_cast<int>(t);
       }},
  };
  return table;
}

std::string flag_of(std::string_view key) {
  std::string flag = "--";
  for (char ch : key) flag += ch == '_' ? '-' : ch;
  return flag;
}

void check_range(std::string_view field, double x, double lo, double hi) {
  if (!(x >= lo && x <= hi)) {
    usage(field, "must lie in [" + format_double(lo) + ", " + format_double(hi) + "], got " +
                     format_double(x));
  }
}

void check_count(std::string_view field, std::size_t x, std::size_t lo, std::size_t hi) {
  if (x < lo || x > hi) {
    usage(field, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                     std::to_string(x));
  }
}

}  // namespace

std::string_view subcommand_name(Subcommand sub) {
  switch (sub) {
    case Subcommand::roc: return "roc";
    case Subcommand::lowdeg_norm: return "lowdeg-norm";
    case Subcommand::envelope: return "envelope";
    case Subcommand::witness: return "witness";
    case Subcommand::diag: return "diag";
  }
  return "unknown";
}

std::optional<Subcommand> parse_subcommand(std::string_view name) {
  for (Subcommand s : {Subcommand::roc, Subcommand::lowdeg_norm, Subcommand::envelope,
                       Subcommand::witness, Subcommand::diag}) {
    if (subcommand_name(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<double> ExperimentConfig::effective_alpha_grid() const {
  if (alpha_grid) return *alpha_grid;
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  return grid;
}

RocPoint ExperimentConfig::effective_exterior() const { return exterior.value_or(RocPoint{0.3, 0.9}); }

Degree ExperimentConfig::effective_degree() const { return degree.value_or(Degree::infinite()); }

std::string ExperimentConfig::effective_output() const {
  if (!output.empty()) return output;
  const bool csv = subcommand == Subcommand::roc || subcommand == Subcommand::lowdeg_norm;
  return std::string(subcommand_name(subcommand)) + (csv ? ".csv" : ".json");
}

SpikePrior parse_prior(std::string_view text) {
  SpikePrior prior = SpikePrior::rademacher();
  if (text == "rademacher") {
    prior = SpikePrior::rademacher();
  } else if (text.starts_with("sparse:")) {
    prior = SpikePrior::sparse(to_double("prior", text.substr(7)));
  } else if (text.starts_with("{")) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      usage("prior", std::string("invalid JSON: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    try {
      if (kind == "rademacher") {
        prior = SpikePrior::rademacher();
      } else if (kind == "sparse") {
        prior = SpikePrior::sparse(j.at("rho").get<double>());
      } else if (kind == "atoms") {
        prior = SpikePrior::atoms(j.at("values").get<std::vector<double>>(),
                                  j.at("probs").get<std::vector<double>>());
      } else {
        usage("prior", "kind must be rademacher, sparse or atoms");
      }
    } catch (const nlohmann::json::exception& e) {
      usage("prior", std::string("malformed prior object: ") + e.what());
    }
  } else {
    usage("prior", "expected rademacher, sparse:<rho> or a JSON object, got '" + std::string(text) + "'");
  }
  try {
    validate(prior);
  } catch (const Error& e) {
    usage("prior", e.what());
  }
  return prior;
}

Degree parse_degree(std::string_view text) {
  if (text == "inf" || text == "infinity") return Degree::infinite();
  const std::uint64_t d = to_u64("degree", text);
  if (d == 0 || d > 1'000'000) usage("degree", "must be a positive integer or 'inf'");
  return Degree(static_cast<unsigned>(d));
}

NormMethod parse_method(std::string_view text) {
  if (text == "binomial_sum") return NormMethod::binomial_sum;
  if (text == "exact_enum") return NormMethod::exact_enum;
  if (text == "monte_carlo") return NormMethod::monte_carlo;
  usage("method", "expected binomial_sum, exact_enum or monte_carlo, got '" + std::string(text) + "'");
}

void validate(const ExperimentConfig& c) {
  if (!c.seed) usage("seed", "required (runs never draw implicit entropy)");
  check_range("lambda", c.lambda, 0.0, kMaxLambda);
  check_count("n", c.n, kMinDim, kMaxDim);
  check_count("trials", c.trials, kMinTrials, kMaxTrials);
  const auto sub = std::string(subcommand_name(c.subcommand));

  switch (c.subcommand) {
    case Subcommand::roc:
      if (!(c.lambda > 0.0 && c.lambda < 1.0)) usage("lambda", sub + " requires 0 < lambda < 1");
      break;
    case Subcommand::envelope:
    case Subcommand::witness:
      if (!(c.lambda > 0.0 && c.lambda < 1.0)) usage("lambda", sub + " requires 0 < lambda < 1");
      break;
    case Subcommand::lowdeg_norm:
      if (c.method == NormMethod::binomial_sum && !c.prior.is_rademacher()) {
        usage("method", "binomial_sum needs the rademacher prior");
      }
      break;
    case Subcommand::diag:
      break;
  }
  if (c.alpha_grid) {
    if (c.alpha_grid->empty()) usage("alpha_grid", "must not be empty");
    for (double a : *c.alpha_grid) check_range("alpha_grid", a, 0.0, 1.0);
  }
  if (c.exterior) {
    if (!(c.exterior->alpha > 0.0 && c.exterior->alpha < 1.0)) {
      usage("exterior", "alpha must lie in (0, 1)");
    }
    check_range("exterior", c.exterior->beta, 0.0, 1.0);
  }
  check_count("r", c.r, 2, WitnessFn::kMaxTests);
  if (c.calib_trials) check_count("calib_trials", *c.calib_trials, kMinTrials, kMaxTrials);
  if (c.envelope_eps && !(*c.envelope_eps > 0.0)) usage("eps", "must be positive");
  if (!(c.discretize_gamma > 0.0 && c.discretize_gamma < 1.0)) {
    usage("discretize_gamma", "must lie in (0, 1)");
  }
  if (!(c.perturb_gamma > 0.0 && c.perturb_gamma < 1.0)) usage("perturb_gamma", "must lie in (0, 1)");
  check_count("overlap_draws", c.overlap_draws, kMinTrials, kMaxTrials);
}

void apply_json(ExperimentConfig& config, const nlohmann::json& j) {
  if (!j.is_object()) usage("config", "top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) usage(key, "unknown config key");
    it->second(config, json_text(key, value));
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["subcommand"] = subcommand_name(c.subcommand);
  j["lambda"] = c.lambda;
  j["n"] = c.n;
  j["prior"] = c.prior.tag();
  j["trials"] = c.trials;
  j["degree"] = c.effective_degree().to_string();
  j["alpha_grid"] = c.effective_alpha_grid();
  const RocPoint ext = c.effective_exterior();
  j["exterior"] = {ext.alpha, ext.beta};
  j["seed"] = c.seed.value_or(0);
  j["output"] = c.effective_output();
  j["method"] = method_name(c.method);
  j["r"] = c.r;
  j["choice"] = c.choice == WitnessChoice::lower ? "lower"
                : c.choice == WitnessChoice::upper ? "upper"
                                                   : "midpoint";
  j["mode"] = c.mode == WitnessMode::live ? "live" : "oracle";
  j["calib_trials"] = c.calib_trials.value_or(c.trials);
  j["route"] = c.route == SpectrumRoute::tridiagonal ? "tridiagonal" : "dense";
  j["eps"] = c.envelope_eps ? nlohmann::json(*c.envelope_eps) : nlohmann::json("auto");
  j["discretize_gamma"] = c.discretize_gamma;
  j["perturb_gamma"] = c.perturb_gamma;
  j["overlap_draws"] = c.overlap_draws;
  return j;
}

std::optional<ExperimentConfig> parse_config(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Spiked Wigner detection experiments", "swrl"};
  std::string sub_text;
  std::string config_path;
  app.add_option("subcommand", sub_text, "roc | lowdeg-norm | envelope | witness | diag");
  app.add_option("--config", config_path, "JSON config file; flags override its values");

  std::map<std::string, std::string> given;
  const std::map<std::string, std::string> help = {
      {"lambda", "signal-to-noise ratio"},
      {"n", "dimension"},
      {"prior", "rademacher | sparse:<rho> | JSON object"},
      {"trials", "Monte-Carlo trials (per arm)"},
      {"degree", "low-degree truncation D (integer or inf)"},
      {"alpha_grid", "comma-separated sizes"},
      {"exterior", "exterior point 'alpha,beta'"},
      {"seed", "64-bit master seed (required)"},
      {"output", "result file path"},
      {"method", "binomial_sum | exact_enum | monte_carlo"},
      {"r", "number of witness segments"},
      {"choice", "witness value: lower | upper | midpoint"},
      {"mode", "witness tests: live | oracle"},
      {"calib_trials", "null calibration trials"},
      {"route", "spectrum sampling: tridiagonal | dense"},
      {"eps", "envelope discretization budget"},
      {"discretize_gamma", "envelope partition ratio"},
      {"perturb_gamma", "perturbation size"},
      {"overlap_draws", "overlap draws for the diag KS check"},
      {"threads", "worker threads (overrides SWRL_THREADS)"},
  };
  for (const auto& [key, text] : help) {
    std::string names = flag_of(key);
    if (key == "degree") names = "-D," + names;
    if (key == "output") names = "-o," + names;
    app.add_option(names, given[key], text);
  }

  std::vector<const char*> argv{"swrl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    fail(Errc::UsageError, e.what());
  }

  ExperimentConfig config;
  bool have_sub = false;
  bool file_sets_trials = false;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) usage("config", "cannot open '" + config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      usage("config", std::string("invalid JSON: ") + e.what());
    }
    have_sub = j.is_object() && j.contains("subcommand");
    file_sets_trials = j.is_object() && j.contains("trials");
    apply_json(config, j);
  }
  if (!sub_text.empty()) {
    setters().at("subcommand")(config, sub_text);
    have_sub = true;
  }
  if (!have_sub) usage("subcommand", "missing (roc, lowdeg-norm, envelope, witness or diag)");
  for (const auto& [key, text] : given) {
    if (app.get_option(flag_of(key))->count() > 0) setters().at(key)(config, text);
  }
  if (config.subcommand == Subcommand::diag && app.get_option("--trials")->count() == 0 &&
      !file_sets_trials) {
    config.trials = kMinTrials;
  }
  validate(config);
  return config;
}

}  // namespace swrl::cli
