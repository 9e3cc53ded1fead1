#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eisen {

enum class ErrorCode {
  ZeroConstantTerm,
  DimensionMismatch,
  RingMismatch,
  IndexOutOfRange,
  RankOutOfRange,
  NotInParabolic,
  SingularBlock,
  SingularMatrix,
  BudgetExceeded,
  NonDominant,
  NonRegularSatake,
  BadShape,
  IdentityFailed,
  DomainError,
  AssertionFailed,
  ConfigError,
  IoError,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroConstantTerm: return "ZeroConstantTerm";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::NotInParabolic: return "NotInParabolic";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NonDominant: return "NonDominant";
    case ErrorCode::NonRegularSatake: return "NonRegularSatake";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::IdentityFailed: return "IdentityFailed";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::AssertionFailed: return "AssertionFailed";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this type; `code()`
/// identifies the condition, `what()` carries the detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace eisen
