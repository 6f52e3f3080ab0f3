#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace meanstream {

enum class ErrorCode {
  InvalidDescriptor,
  DomainError,
  FamilyMismatch,
  EmptyState,
  NumericalFailure,
  ParseError,
  GeneratorInvalid,
  PairInvalid,
  DegenerateExponents,
  FinalizeOutsideBranches,
  MissingGamma,
  TooLarge,
  BudgetExceeded,
  InsufficientData,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is
/// stable and is what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message);

  /// Byte offset into the parsed payload where the problem was detected.
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace meanstream
