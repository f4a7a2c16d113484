#include "swrl/stats.hpp"

#include <algorithm>
#include <cmath>

namespace swrl::stats {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

double ks_distance(std::span<const double> x, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_distance_two_sample(std::span<const double> x, std::span<const double> y) {
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

std::vector<double> isotonic_fit(std::span<const double> y, std::span<const double> weights) {
  struct Block {
    double value;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    blocks.push_back({y[i], w, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].value > blocks.back().value) {
      Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double total = prev.weight + top.weight;
      prev.value = total > 0 ? (prev.value * prev.weight + top.value * top.weight) / total
                             : 0.5 * (prev.value + top.value);
      prev.weight = total;
      prev.count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.value);
  return out;
}

double jackknife_mean_stderr(std::span<const double> x, std::size_t blocks) {
  const std::size_t n = x.size();
  blocks = std::min(blocks, n);
  if (blocks < 2) return 0.0;
  const std::size_t size = n / blocks;
  std::vector<double> sums(blocks, 0.0);
  std::vector<std::size_t> counts(blocks, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = std::min(i / size, blocks - 1);
    sums[b] += x[i];
    ++counts[b];
  }
  double total = 0.0;
  for (double s : sums) total += s;
  std::vector<double> loo(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    loo[b] = (total - sums[b]) / static_cast<double>(n - counts[b]);
  }
  const double loo_mean = mean(loo);
  double acc = 0.0;
  for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
  const auto g = static_cast<double>(blocks);
  return std::sqrt((g - 1.0) / g * acc);
}

double binomial_stderr(double p, std::size_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

}  // namespace swrl::stats
