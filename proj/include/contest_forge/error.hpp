#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace contest_forge {

enum class ErrorCode {
  // validation
  NotMonotone,
  BudgetExceeded,
  NegativePrize,
  IndexOutOfRange,
  NegativeWeight,
  BudgetNotExhausted,
  InvalidCost,
  InvalidArgument,
  PopulationTooLarge,
  OutOfRange,
  NoLowCostMass,
  ProfileNotSubEquilibrium,
  BudgetTooSmall,
  Io,
  // numerical
  NonFinite,
  IterationLimit,
  BracketFailure,
  OrderingViolation,
  NotSubEquilibrium,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures of a numerical procedure as opposed to bad input.
bool is_numerical(ErrorCode code) noexcept;

class ContestError : public std::runtime_error {
 public:
  ContestError(ErrorCode code, const std::string& message,
               std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  /// 1-based position of the offending element, when the error has one.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace contest_forge
