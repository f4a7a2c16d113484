#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <vector>

#include "swrl/errors.hpp"
#include "swrl/normal.hpp"
#include "swrl/parallel.hpp"
#include "swrl/random.hpp"
#include "swrl/stats.hpp"

using namespace swrl;

TEST_CASE("rng: same seed gives the same stream") {
  Rng a(123), b(123), c(124);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs |= x != c();
  }
  CHECK(differs);
}

TEST_CASE("rng: uniform lies in [0, 1) and normal has unit variance") {
  Rng rng(7);
  std::vector<double> z(200000);
  for (double& x : z) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    x = rng.normal();
  }
  CHECK(std::abs(stats::mean(z)) < 0.01);
  CHECK(std::abs(stats::sample_sd(z) - 1.0) < 0.01);
}

TEST_CASE("stream keys: index, tag and child all separate streams") {
  const StreamKey key(42, "roc");
  CHECK(key.stream(5)() == key.stream(5)());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 1000; ++i) firsts.insert(key.stream(i)());
  CHECK(firsts.size() == 1000);
  CHECK(StreamKey(42, "roc").stream(0)() != StreamKey(42, "diag").stream(0)());
  CHECK(key.child("null").stream(0)() != key.child("alternative").stream(0)());
  CHECK(StreamKey(43, "roc").stream(0)() != key.stream(0)());
}

TEST_CASE("parallel_map output does not depend on the worker count") {
  auto draw = [](std::size_t i) {
    Rng rng = StreamKey(9, "parallel").stream(i);
    double s = 0.0;
    for (int k = 0; k < 50; ++k) s += rng.normal();
    return s;
  };
  set_worker_count(1);
  const auto one = parallel_map<double>(5000, draw);
  set_worker_count(4);
  const auto four = parallel_map<double>(5000, draw);
  set_worker_count(0);
  CHECK(one == four);
}

TEST_CASE("parallel_for propagates exceptions") {
  set_worker_count(3);
  CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                    if (i == 57) fail(Errc::Overflow, "boom");
                  }),
                  Error);
  set_worker_count(0);
}

TEST_CASE("worker count follows SWRL_THREADS unless overridden") {
  set_worker_count(0);
  ::setenv("SWRL_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  set_worker_count(2);
  CHECK(worker_count() == 2);
  set_worker_count(0);
  ::unsetenv("SWRL_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("normal cdf and quantile are inverse to 1e-9") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(0.4723807) == doctest::Approx(0.6816725).epsilon(1e-6));
  for (double p : {1e-10, 1e-4, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-9}) {
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-9 * std::max(1.0, p / (1 - p)));
  }
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isinf(normal_quantile(1.0)));
  CHECK(normal_sf(8.0) == doctest::Approx(6.22096e-16).epsilon(1e-5));
}

TEST_CASE("stats: mean, sd, binomial stderr") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(stats::mean(x) == doctest::Approx(2.5));
  CHECK(stats::sample_sd(x) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(stats::binomial_stderr(0.5, 100) == doctest::Approx(0.05));
}

TEST_CASE("stats: isotonic fit pools adjacent violators") {
  const std::vector<double> y{1, 3, 2, 4, 3.5, 5};
  const auto fit = stats::isotonic_fit(y, {});
  const std::vector<double> expect{1, 2.5, 2.5, 3.75, 3.75, 5};
  REQUIRE(fit.size() == expect.size());
  for (std::size_t i = 0; i < fit.size(); ++i) CHECK(fit[i] == doctest::Approx(expect[i]));
  const std::vector<double> w{1, 3, 1};
  const auto wfit = stats::isotonic_fit(std::vector<double>{2, 1, 3}, w);
  CHECK(wfit[0] == doctest::Approx(1.25));
  CHECK(wfit[1] == doctest::Approx(1.25));
}

TEST_CASE("stats: KS distances") {
  Rng rng(3);
  std::vector<double> u(20000), v(20000);
  for (double& x : u) x = rng.uniform();
  for (double& x : v) x = rng.uniform();
  const double d = stats::ks_distance(u, [](double t) { return std::clamp(t, 0.0, 1.0); });
  CHECK(d < 1.63 / std::sqrt(20000.0));
  CHECK(stats::ks_distance_two_sample(u, v) < 1.95 * std::sqrt(2.0 / 20000.0));
  std::vector<double> shifted = v;
  for (double& x : shifted) x += 0.1;
  CHECK(stats::ks_distance_two_sample(u, shifted) == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("stats: block jackknife matches the iid standard error") {
  Rng rng(11);
  std::vector<double> x(100000);
  for (double& v : x) v = rng.normal();
  const double se = stats::jackknife_mean_stderr(x, 100);
  CHECK(se == doctest::Approx(1.0 / std::sqrt(100000.0)).epsilon(0.2));
}

TEST_CASE("errors: numerical guards are classified") {
  CHECK(is_numerical_guard(Errc::MarginTooSmall));
  CHECK(is_numerical_guard(Errc::DegenerateDenominator));
  CHECK_FALSE(is_numerical_guard(Errc::UsageError));
  CHECK_FALSE(is_numerical_guard(Errc::InvalidPrior));
  try {
    fail(Errc::NotExterior, "inside");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotExterior);
  }
}
