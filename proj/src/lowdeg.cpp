#include "swrl/lowdeg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "swrl/errors.hpp"
#include "swrl/parallel.hpp"
#include "swrl/simd/kernels.hpp"
#include "swrl/stats.hpp"

namespace swrl {
namespace {

constexpr double kMaxLog = 709.782712893384;  // log(DBL_MAX)

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double log_sum_exp(std::span<const double> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double t : terms) top = std::max(top, t);
  if (!std::isfinite(top)) return top;
  // Integer shift: near-tied maxima then share one scaling, so the result is monotone in each term.
  top = std::ceil(top);
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    fail(Errc::InvalidArgument, "lambda must be finite and nonnegative");
  }
}

}  // namespace

std::string Degree::to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

std::string method_name(NormMethod method) {
  switch (method) {
    case NormMethod::exact_enum: return "exact_enum";
    case NormMethod::binomial_sum: return "binomial_sum";
    case NormMethod::monte_carlo: return "monte_carlo";
    case NormMethod::ratio: return "ratio";
  }
  return "unknown";
}

double exp_trunc(double z, Degree degree) {
  if (!(z >= 0.0)) fail(Errc::InvalidArgument, "exp_trunc needs z >= 0");
  if (degree.is_infinite()) return std::exp(z);
  double out = 0.0;
  simd::kernels().exp_trunc_batch(&z, 1, degree.value(), &out);
  // A partial sum never exceeds exp(z); the cap keeps rounding from breaking monotonicity in D.
  return std::min(out, std::exp(z));
}

double log_exp_trunc(double z, Degree degree) {
  if (!(z >= 0.0)) fail(Errc::InvalidArgument, "log_exp_trunc needs z >= 0");
  if (z == 0.0) return 0.0;
  if (degree.is_infinite()) return z;

  const auto top = static_cast<unsigned>(std::min<double>(degree.value(), std::floor(z)));
  const double log_peak = top * std::log(z) - std::lgamma(top + 1.0);
  double sum = 1.0;
  double rel = 1.0;
  for (unsigned d = top; d >= 1; --d) {  // t_{d-1} / t_d = d / z
    rel *= static_cast<double>(d) / z;
    sum += rel;
    if (rel < 1e-18 * sum) break;
  }
  rel = 1.0;
  for (unsigned d = top + 1; d <= degree.value(); ++d) {  // t_d / t_{d-1} = z / d
    rel *= z / static_cast<double>(d);
    sum += rel;
    if (static_cast<double>(d) > z && rel < 1e-18 * sum) break;
  }
  return std::min(z, log_peak + std::log(sum));
}

double overlap_statistic(std::span<const double> x, std::span<const double> x_prime, double lambda) {
  if (x.size() != x_prime.size()) fail(Errc::DimensionMismatch, "spike vectors differ in length");
  const auto& k = simd::kernels();
  const double nx = k.sum_squares(x.data(), x.size());
  const double ny = k.sum_squares(x_prime.data(), x_prime.size());
  if (nx == 0.0 || ny == 0.0) return 0.0;
  const double ip = k.dot(x.data(), x_prime.data(), x.size());
  const double cos_sq = std::min(1.0, ip * ip / (nx * ny));
  return 0.5 * lambda * lambda * static_cast<double>(x.size()) * cos_sq;
}

double sample_overlap_statistic(const SpikePrior& prior, std::size_t n, double lambda, Rng& rng) {
  thread_local std::vector<double> x, y;
  x.resize(n);
  y.resize(n);
  sample_vector_into(prior, x, rng);
  sample_vector_into(prior, y, rng);
  return overlap_statistic(x, y, lambda);
}

std::vector<double> sample_overlap_statistics(const SpikePrior& prior, std::size_t n,
                                              double lambda, std::size_t count,
                                              const StreamKey& key) {
  check_lambda(lambda);
  return parallel_map<double>(count, [&](std::size_t i) {
    Rng rng = key.stream(i);
    return sample_overlap_statistic(prior, n, lambda, rng);
  });
}

NormEstimate ldr_norm_mc(const SpikePrior& prior, std::size_t n, double lambda, Degree degree,
                         std::size_t trials, const StreamKey& key) {
  validate(prior);
  if (trials < kMinNormTrials) fail(Errc::InvalidArgument, "ldr_norm_mc needs >= 1000 trials");
  const std::vector<double> a = sample_overlap_statistics(prior, n, lambda, trials, key);

  std::vector<double> values(trials);
  if (degree.is_infinite()) {
    std::transform(a.begin(), a.end(), values.begin(), [](double z) { return std::exp(z); });
  } else {
    simd::kernels().exp_trunc_batch(a.data(), a.size(), degree.value(), values.data());
  }
  NormEstimate est;
  est.value = stats::mean(values);
  if (!std::isfinite(est.value)) fail(Errc::Overflow, "Monte-Carlo norm overflowed");
  est.std_error = stats::jackknife_mean_stderr(values, kJackknifeBlocks);
  est.method = NormMethod::monte_carlo;
  est.degree = degree;
  est.trials = trials;
  return est;
}

NormEstimate ldr_norm_exact_rademacher(std::size_t n, double lambda, Degree degree) {
  check_lambda(lambda);
  if (n == 0 || n > kMaxBinomialN) {
    fail(Errc::InvalidArgument, "binomial sum supports 1 <= n <= 10^6");
  }
  const double scale = lambda * lambda / (2.0 * static_cast<double>(n));
  const double log_half_n = static_cast<double>(n) * std::numbers::ln2;
  std::vector<double> terms(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double gap = static_cast<double>(n) - 2.0 * static_cast<double>(k);
    terms[k] = log_binomial(n, k) - log_half_n + log_exp_trunc(scale * gap * gap, degree);
  }
  const double log_value = log_sum_exp(terms);
  if (!(log_value < kMaxLog)) {
    fail(Errc::Overflow, "norm exceeds the double range (log value " + std::to_string(log_value) + ")");
  }
  NormEstimate est;
  est.value = std::exp(log_value);
  est.method = NormMethod::binomial_sum;
  est.degree = degree;
  return est;
}

NormEstimate ldr_norm_exact_enum(const SpikePrior& prior, std::size_t n, double lambda,
                                 Degree degree) {
  validate(prior);
  check_lambda(lambda);
  const FiniteAtoms atoms = prior.as_atoms();
  const std::size_t k = atoms.values.size();
  const double vectors_d = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (n == 0 || vectors_d * vectors_d > std::ldexp(1.0, 26)) {
    fail(Errc::BudgetInfeasible, "enumeration limited to 2^26 (x, x') pairs");
  }
  const auto count = static_cast<std::size_t>(vectors_d);

  std::vector<double> vecs(count * n);
  std::vector<double> weight(count, 1.0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t code = idx;
    for (std::size_t j = 0; j < n; ++j, code /= k) {
      vecs[idx * n + j] = atoms.values[code % k];
      weight[idx] *= atoms.probs[code % k];
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (weight[i] == 0.0) continue;
    std::span<const double> x(&vecs[i * n], n);
    double row = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (weight[j] == 0.0) continue;
      const double a = overlap_statistic(x, std::span<const double>(&vecs[j * n], n), lambda);
      row += weight[j] * exp_trunc(a, degree);
    }
    total += weight[i] * row;
  }
  NormEstimate est;
  est.value = total;
  est.method = NormMethod::exact_enum;
  est.degree = degree;
  return est;
}

double ldr_norm_limit(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(1.0 - lambda * lambda, -0.25);
}

NormEstimate ratio_estimate(std::span<const double> f_under_p, std::span<const double> f_under_q) {
  if (f_under_p.empty() || f_under_q.empty()) {
    fail(Errc::InvalidArgument, "ratio_estimate needs samples under both P and Q");
  }
  std::vector<double> sq(f_under_q.size());
  std::transform(f_under_q.begin(), f_under_q.end(), sq.begin(), [](double f) { return f * f; });
  const double mean_p = stats::mean(f_under_p);
  const double mean_sq = stats::mean(sq);
  if (!(mean_sq > 0.0)) fail(Errc::DegenerateDenominator, "E_Q[f^2] is zero");

  const double var_p = f_under_p.size() > 1 ? std::pow(stats::sample_sd(f_under_p), 2) : 0.0;
  const double var_sq = sq.size() > 1 ? std::pow(stats::sample_sd(sq), 2) : 0.0;
  const auto np = static_cast<double>(f_under_p.size());
  const auto nq = static_cast<double>(f_under_q.size());

  NormEstimate est;
  est.value = mean_p / std::sqrt(mean_sq);
  est.std_error = std::sqrt(var_p / (np * mean_sq) +
                            mean_p * mean_p * var_sq / (4.0 * mean_sq * mean_sq * mean_sq * nq));
  est.method = NormMethod::ratio;
  est.trials = f_under_p.size() + f_under_q.size();
  return est;
}

double overlap_ks_distance(std::span<const double> samples, double lambda) {
  if (!(lambda > 0.0)) fail(Errc::InvalidArgument, "KS reference needs lambda > 0");
  return stats::ks_distance(samples, [lambda](double a) {
    return a <= 0.0 ? 0.0 : std::erf(std::sqrt(a) / lambda);
  });
}

TailDiagnostic overlap_tail_diagnostic(std::size_t n, std::span<const double> u_grid, double slack) {
  if (u_grid.size() < 2) fail(Errc::InvalidArgument, "tail diagnostic needs at least two u values");
  TailDiagnostic d;
  d.slack = slack;
  const double log_half_n = static_cast<double>(n) * std::numbers::ln2;
  const auto nd = static_cast<double>(n);

  for (double u : u_grid) {
    std::vector<double> terms;
    for (std::size_t k = 0; k <= n; ++k) {
      if (std::abs(nd - 2.0 * static_cast<double>(k)) >= u * nd) {
        terms.push_back(log_binomial(n, k) - log_half_n);
      }
    }
    d.u.push_back(u);
    d.log_prob.push_back(log_sum_exp(terms));
  }

  // Least squares of log_prob on x = n u^2 / 2.
  std::vector<double> xs;
  for (double u : d.u) xs.push_back(nd * u * u / 2.0);
  const double mx = stats::mean(xs);
  const double my = stats::mean(d.log_prob);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (d.log_prob[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  d.fitted_rate = -sxy / sxx;
  d.log_c = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d.log_c = std::max(d.log_c, d.log_prob[i] + slack * xs[i]);
  }
  d.passes = d.fitted_rate >= slack;
  return d;
}

}  // namespace swrl
