#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace atk {

enum class ErrorCode {
  ParseError,
  InvalidName,
  DuplicateResource,
  UnknownEndpoint,
  SignatureViolation,
  DuplicateRelation,
  CardinalityViolation,
  DanglingResource,
  DuplicateStepName,
  NonContiguousIndices,
  EmptyObjectives,
  InvalidStateValue,
  ConflictingPrerequisite,
  PreconditionUnsatisfied,
  ObjectiveNotReached,
  MissingDevice,
  UnresolvedTarget,
  UndeclaredState,
  MissingGoal,
  NotLinear,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::DuplicateResource: return "DuplicateResource";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::SignatureViolation: return "SignatureViolation";
    case ErrorCode::DuplicateRelation: return "DuplicateRelation";
    case ErrorCode::CardinalityViolation: return "CardinalityViolation";
    case ErrorCode::DanglingResource: return "DanglingResource";
    case ErrorCode::DuplicateStepName: return "DuplicateStepName";
    case ErrorCode::NonContiguousIndices: return "NonContiguousIndices";
    case ErrorCode::EmptyObjectives: return "EmptyObjectives";
    case ErrorCode::InvalidStateValue: return "InvalidStateValue";
    case ErrorCode::ConflictingPrerequisite: return "ConflictingPrerequisite";
    case ErrorCode::PreconditionUnsatisfied: return "PreconditionUnsatisfied";
    case ErrorCode::ObjectiveNotReached: return "ObjectiveNotReached";
    case ErrorCode::MissingDevice: return "MissingDevice";
    case ErrorCode::UnresolvedTarget: return "UnresolvedTarget";
    case ErrorCode::UndeclaredState: return "UndeclaredState";
    case ErrorCode::MissingGoal: return "MissingGoal";
    case ErrorCode::NotLinear: return "NotLinear";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a stable code; what() is
/// "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace atk
