#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swrl {

enum class Errc {
  InvalidPrior,
  InvalidArgument,
  ConvergenceFailure,
  DimensionMismatch,
  NotConcavePosition,
  MalformedSequence,
  NotExterior,
  MarginTooSmall,
  BudgetInfeasible,
  DivergentIntegral,
  Overflow,
  DegenerateDenominator,
  MalformedOutcomes,
  TooManyTests,
  UsageError,
};

std::string_view errc_name(Errc code) noexcept;

// Numerical guards map to CLI exit code 2; everything else is a caller error.
bool is_numerical_guard(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace swrl
