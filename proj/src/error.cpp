#include "contest_forge/error.hpp"

namespace contest_forge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NegativePrize: return "NegativePrize";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::BudgetNotExhausted: return "BudgetNotExhausted";
    case ErrorCode::InvalidCost: return "InvalidCost";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PopulationTooLarge: return "PopulationTooLarge";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoLowCostMass: return "NoLowCostMass";
    case ErrorCode::ProfileNotSubEquilibrium: return "ProfileNotSubEquilibrium";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::Io: return "Io";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::OrderingViolation: return "OrderingViolation";
    case ErrorCode::NotSubEquilibrium: return "NotSubEquilibrium";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFinite:
    case ErrorCode::IterationLimit:
    case ErrorCode::BracketFailure:
    case ErrorCode::OrderingViolation:
    case ErrorCode::NotSubEquilibrium:
      return true;
    default:
      return false;
  }
}

ContestError::ContestError(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      index_(index) {}

}  // namespace contest_forge
