#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kra {

enum class ErrorCode {
  ComplementaryPair,
  WidthOutOfRange,
  EmptyClause,
  SyntaxError,
  VarOutOfRange,
  InvalidParams,
  TooLarge,
  IterationCapExceeded,
  PredicateNotSatisfied,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ComplementaryPair: return "ComplementaryPair";
    case ErrorCode::WidthOutOfRange: return "WidthOutOfRange";
    case ErrorCode::EmptyClause: return "EmptyClause";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::VarOutOfRange: return "VarOutOfRange";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::IterationCapExceeded: return "IterationCapExceeded";
    case ErrorCode::PredicateNotSatisfied: return "PredicateNotSatisfied";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kra
