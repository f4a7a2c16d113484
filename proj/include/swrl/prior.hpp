#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "swrl/random.hpp"

namespace swrl {

struct Rademacher {};

/// +-1/sqrt(rho) with probability rho/2 each, 0 otherwise.
struct SparseRademacher {
  double rho = 1.0;
};

struct FiniteAtoms {
  std::vector<double> values;
  std::vector<double> probs;
};

/// Spike-entry distribution: mean 0, variance 1, bounded support.
class SpikePrior {
 public:
  using Variant = std::variant<Rademacher, SparseRademacher, FiniteAtoms>;

  SpikePrior() = default;
  SpikePrior(Variant v) : variant_(std::move(v)) {}  // NOLINT: implicit on purpose

  static SpikePrior rademacher() { return SpikePrior(Rademacher{}); }
  static SpikePrior sparse(double rho) { return SpikePrior(SparseRademacher{rho}); }
  static SpikePrior atoms(std::vector<double> values, std::vector<double> probs) {
    return SpikePrior(FiniteAtoms{std::move(values), std::move(probs)});
  }

  const Variant& variant() const noexcept { return variant_; }
  bool is_rademacher() const noexcept { return std::holds_alternative<Rademacher>(variant_); }

  /// Atom list (values, probabilities) equivalent to this prior.
  FiniteAtoms as_atoms() const;

  /// Largest |atom|.
  double max_abs() const;

  /// Probability that a single entry is exactly 0.
  double zero_mass() const;

  /// Short descriptor, e.g. "rademacher", "sparse(rho=0.25)".
  std::string tag() const;

 private:
  Variant variant_ = Rademacher{};
};

inline constexpr double kPriorTolerance = 1e-12;

/// Throws Error(InvalidPrior) naming the violated invariant.
void validate(const SpikePrior& prior);

/// n i.i.d. entries from the prior; deterministic given the stream state.
std::vector<double> sample_vector(const SpikePrior& prior, std::size_t n, Rng& rng);

/// In-place variant used by hot loops.
void sample_vector_into(const SpikePrior& prior, std::span<double> out, Rng& rng);

}  // namespace swrl
