#pragma once

#include <stdexcept>
#include <string>

namespace matorient {

enum class ErrorCode {
  EmptyBases,
  MixedCardinality,
  ExchangeViolation,
  ElementOutOfRange,
  IndexOutOfRange,
  DimensionMismatch,
  NonPrimeModulus,
  UnsupportedModulus,
  EvenCharacteristic,
  InvalidFredholmVector,
  NotASolution,
  IncompleteAssignment,
  DegreeOverflowBudget,
  ShapeMismatch,
  ParseError,
  ValidationError,
  LengthMismatch,
  SizeOverBudget,
  InternalError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::EmptyBases: return "EmptyBases";
    case ErrorCode::MixedCardinality: return "MixedCardinality";
    case ErrorCode::ExchangeViolation: return "ExchangeViolation";
    case ErrorCode::ElementOutOfRange: return "ElementOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::UnsupportedModulus: return "UnsupportedModulus";
    case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorCode::InvalidFredholmVector: return "InvalidFredholmVector";
    case ErrorCode::NotASolution: return "NotASolution";
    case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorCode::DegreeOverflowBudget: return "DegreeOverflowBudget";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SizeOverBudget: return "SizeOverBudget";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

// Every library error is an Error; `code` identifies the condition, `line`
// is nonzero for file-parsing errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, size_t line = 0)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message +
                           (line ? " (line " + std::to_string(line) + ")" : "")),
        code_(code),
        line_(line) {}

  ErrorCode code() const { return code_; }
  size_t line() const { return line_; }

 private:
  ErrorCode code_;
  size_t line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message, size_t line = 0) {
  throw Error(code, message, line);
}

}  // namespace matorient
