#include "meanstream/error.hpp"

namespace meanstream {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::EmptyState: return "EmptyState";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::GeneratorInvalid: return "GeneratorInvalid";
    case ErrorCode::PairInvalid: return "PairInvalid";
    case ErrorCode::DegenerateExponents: return "DegenerateExponents";
    case ErrorCode::FinalizeOutsideBranches: return "FinalizeOutsideBranches";
    case ErrorCode::MissingGamma: return "MissingGamma";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InsufficientData: return "InsufficientData";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(std::size_t offset, const std::string& message)
    : Error(ErrorCode::ParseError, message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

}  // namespace meanstream
