#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smfdfa {

// Values mirror the SMFDFA_* status codes of the C API.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  InvalidConfig = 2,
  EmptyInput = 10,
  NonPositivePrice = 11,
  MissingTimestamps = 12,
  ParseError = 13,
  IoError = 14,
  NonMonotonicTimestamps = 15,
  NonFiniteValue = 16,
  SeriesTooShort = 17,
  ScaleTooLarge = 20,
  TooFewPoints = 21,
  SingularFit = 22,
  AllSegmentsExcluded = 23,
  InsufficientScales = 24,
  NonFiniteSurface = 25,
  GridTooSmall = 26,
  GridMismatch = 27,
  EmbeddingNotPositive = 28,
  Internal = 99,
};

// Stable CamelCase name, used in diagnostics and JSON output.
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smfdfa
