#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace swrl::stats {

double mean(std::span<const double> x);

/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> x);

/// Kolmogorov-Smirnov distance between the empirical CDF of x and cdf.
double ks_distance(std::span<const double> x, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance_two_sample(std::span<const double> x, std::span<const double> y);

/// Pool-adjacent-violators: nondecreasing least-squares fit with weights.
std::vector<double> isotonic_fit(std::span<const double> y, std::span<const double> weights);

/// Block jackknife standard error of the mean, blocks of equal size taken in
/// index order (the remainder joins the last block).
double jackknife_mean_stderr(std::span<const double> x, std::size_t blocks);

/// sqrt(p (1 - p) / trials).
double binomial_stderr(double p, std::size_t trials);

}  // namespace swrl::stats
