#include "swrl/errors.hpp"

namespace swrl {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidPrior: return "InvalidPrior";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotConcavePosition: return "NotConcavePosition";
    case Errc::MalformedSequence: return "MalformedSequence";
    case Errc::NotExterior: return "NotExterior";
    case Errc::MarginTooSmall: return "MarginTooSmall";
    case Errc::BudgetInfeasible: return "BudgetInfeasible";
    case Errc::DivergentIntegral: return "DivergentIntegral";
    case Errc::Overflow: return "Overflow";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::MalformedOutcomes: return "MalformedOutcomes";
    case Errc::TooManyTests: return "TooManyTests";
    case Errc::UsageError: return "UsageError";
  }
  return "Unknown";
}

bool is_numerical_guard(Errc code) noexcept {
  switch (code) {
    case Errc::ConvergenceFailure:
    case Errc::MarginTooSmall:
    case Errc::BudgetInfeasible:
    case Errc::DivergentIntegral:
    case Errc::Overflow:
    case Errc::DegenerateDenominator:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace swrl
