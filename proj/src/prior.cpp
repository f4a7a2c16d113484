#include "swrl/prior.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swrl/errors.hpp"

namespace swrl {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_atoms(const FiniteAtoms& a) {
  if (a.values.empty() || a.values.size() != a.probs.size()) {
    fail(Errc::InvalidPrior, "values and probs must be nonempty and of equal length");
  }
  double total = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double v = a.values[i];
    const double p = a.probs[i];
    if (!std::isfinite(v)) fail(Errc::InvalidPrior, "support is unbounded (non-finite atom)");
    if (!(p >= 0.0) || p > 1.0) fail(Errc::InvalidPrior, "probability outside [0, 1]");
    total += p;
    mean += p * v;
    second += p * v * v;
  }
  if (std::abs(total - 1.0) > kPriorTolerance) fail(Errc::InvalidPrior, "probs do not sum to 1");
  if (std::abs(mean) > kPriorTolerance) fail(Errc::InvalidPrior, "mean != 0");
  if (std::abs(second - 1.0) > kPriorTolerance) fail(Errc::InvalidPrior, "variance != 1");
}

}  // namespace

FiniteAtoms SpikePrior::as_atoms() const {
  return std::visit(Overloaded{
                        [](const Rademacher&) { return FiniteAtoms{{1.0, -1.0}, {0.5, 0.5}}; },
                        [](const SparseRademacher& s) {
                          const double a = 1.0 / std::sqrt(s.rho);
                          if (s.rho == 1.0) return FiniteAtoms{{a, -a}, {0.5, 0.5}};
                          return FiniteAtoms{{a, -a, 0.0}, {s.rho / 2, s.rho / 2, 1.0 - s.rho}};
                        },
                        [](const FiniteAtoms& f) { return f; },
                    },
                    variant_);
}

double SpikePrior::max_abs() const {
  const FiniteAtoms a = as_atoms();
  double m = 0.0;
  for (double v : a.values) m = std::max(m, std::abs(v));
  return m;
}

double SpikePrior::zero_mass() const {
  const FiniteAtoms a = as_atoms();
  double p = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] == 0.0) p += a.probs[i];
  }
  return p;
}

std::string SpikePrior::tag() const {
  return std::visit(Overloaded{
                        [](const Rademacher&) { return std::string("rademacher"); },
                        [](const SparseRademacher& s) {
                          std::ostringstream os;
                          os << "sparse(rho=" << s.rho << ")";
                          return os.str();
                        },
                        [](const FiniteAtoms& f) {
                          std::ostringstream os;
                          os << "atoms(k=" << f.values.size() << ")";
                          return os.str();
                        },
                    },
                    variant_);
}

void validate(const SpikePrior& prior) {
  std::visit(Overloaded{
                 [](const Rademacher&) {},
                 [](const SparseRademacher& s) {
                   if (!(s.rho > 0.0 && s.rho <= 1.0)) {
                     fail(Errc::InvalidPrior, "sparse rho must lie in (0, 1]");
                   }
                 },
                 [](const FiniteAtoms& f) { check_atoms(f); },
             },
             prior.variant());
}

void sample_vector_into(const SpikePrior& prior, std::span<double> out, Rng& rng) {
  std::visit(Overloaded{
                 [&](const Rademacher&) {
                   // 64 signs per draw.
                   std::size_t i = 0;
                   while (i < out.size()) {
                     std::uint64_t bits = rng();
                     for (int b = 0; b < 64 && i < out.size(); ++b, ++i, bits >>= 1) {
                       out[i] = (bits & 1U) ? 1.0 : -1.0;
                     }
                   }
                 },
                 [&](const SparseRademacher& s) {
                   const double a = 1.0 / std::sqrt(s.rho);
                   const double half = s.rho / 2;
                   for (double& x : out) {
                     const double u = rng.uniform();
                     x = u < half ? a : (u < s.rho ? -a : 0.0);
                   }
                 },
                 [&](const FiniteAtoms& f) {
                   std::vector<double> cumulative(f.probs.size());
                   double c = 0.0;
                   for (std::size_t k = 0; k < f.probs.size(); ++k) cumulative[k] = (c += f.probs[k]);
                   for (double& x : out) {
                     const double u = rng.uniform() * c;
                     auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
                     const auto k = std::min<std::size_t>(
                         static_cast<std::size_t>(it - cumulative.begin()), f.values.size() - 1);
                     x = f.values[k];
                   }
                 },
             },
             prior.variant());
}

std::vector<double> sample_vector(const SpikePrior& prior, std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  sample_vector_into(prior, x, rng);
  return x;
}

}  // namespace swrl
