#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "swrl/prior.hpp"
#include "swrl/random.hpp"

namespace swrl {

/// Polynomial degree bound; infinite means the full likelihood ratio.
class Degree {
 public:
  constexpr explicit Degree(unsigned d) : value_(d), infinite_(false) {}
  static constexpr Degree infinite() { return Degree(); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr unsigned value() const noexcept { return value_; }  // meaningless when infinite
  std::string to_string() const;

  friend constexpr bool operator==(const Degree&, const Degree&) = default;

 private:
  constexpr Degree() : value_(0), infinite_(true) {}

  unsigned value_;
  bool infinite_;
};

/// sum_{d=0}^{D} z^d / d! for z >= 0, by the running-term recurrence; exp(z)
/// for D = infinity.
double exp_trunc(double z, Degree degree);

/// log of exp_trunc, evaluated around the largest term so that it stays
/// finite far beyond the double exponent range.
double log_exp_trunc(double z, Degree degree);

enum class NormMethod { exact_enum, binomial_sum, monte_carlo, ratio };

std::string method_name(NormMethod method);

struct NormEstimate {
  double value = 0.0;
  double std_error = 0.0;
  NormMethod method = NormMethod::monte_carlo;
  Degree degree = Degree::infinite();
  std::size_t trials = 0;
};

/// A = lambda^2 n <x, x'>^2 / (2 |x|^2 |x'|^2), and 0 when either vector is 0.
double overlap_statistic(std::span<const double> x, std::span<const double> x_prime, double lambda);

/// One draw of A from two independent spikes taken in turn from rng.
double sample_overlap_statistic(const SpikePrior& prior, std::size_t n, double lambda, Rng& rng);

/// `count` i.i.d. draws of A, draw i from key.stream(i).
std::vector<double> sample_overlap_statistics(const SpikePrior& prior, std::size_t n,
                                              double lambda, std::size_t count,
                                              const StreamKey& key);

inline constexpr std::size_t kMinNormTrials = 1000;
inline constexpr std::size_t kJackknifeBlocks = 100;

/// Monte-Carlo |L^{<=D}|^2 = E exp^{<=D}(A) with block-jackknife stderr.
NormEstimate ldr_norm_mc(const SpikePrior& prior, std::size_t n, double lambda, Degree degree,
                         std::size_t trials, const StreamKey& key);

/// Exact |L^{<=D}|^2 for the Rademacher prior, where A = lambda^2 (n - 2k)^2 / (2n)
/// with k ~ Binomial(n, 1/2). Weights and terms are combined in the log domain.
/// Throws Overflow if the result exceeds the double range.
NormEstimate ldr_norm_exact_rademacher(std::size_t n, double lambda, Degree degree);

inline constexpr std::size_t kMaxBinomialN = 1'000'000;

/// Exact |L^{<=D}|^2 by enumerating every pair (x, x') of atom vectors.
/// Independent of the binomial route; limited to 2^26 pairs.
NormEstimate ldr_norm_exact_enum(const SpikePrior& prior, std::size_t n, double lambda,
                                 Degree degree);

/// (1 - lambda^2)^{-1/4}: the limit of |L_lambda| and of |L^{<=D}| for
/// growing D = o(n / log n).
double ldr_norm_limit(double lambda);

/// R(f) = E_P[f] / sqrt(E_Q[f^2]) from samples under P and Q, with
/// delta-method stderr. Throws DegenerateDenominator if mean f^2 under Q is 0.
NormEstimate ratio_estimate(std::span<const double> f_under_p, std::span<const double> f_under_q);

/// Kolmogorov-Smirnov distance of A samples to lambda^2 chi^2_1 / 2.
double overlap_ks_distance(std::span<const double> samples, double lambda);

/// Exact tail of the Rademacher overlap cosine, log Pr{|<x,x'>| / n >= u},
/// together with a least-squares decay rate against n u^2 / 2.
struct TailDiagnostic {
  std::vector<double> u;
  std::vector<double> log_prob;
  double fitted_rate = 0.0;  // -slope of log_prob against n u^2 / 2
  double log_c = 0.0;        // smallest log C with log_prob <= -slack n u^2 / 2 + log C
  double slack = 0.8;
  bool passes = false;       // fitted_rate >= slack
};

TailDiagnostic overlap_tail_diagnostic(std::size_t n, std::span<const double> u_grid,
                                       double slack = 0.8);

}  // namespace swrl
