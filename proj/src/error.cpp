#include "smfdfa/error.hpp"

namespace smfdfa {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::MissingTimestamps: return "MissingTimestamps";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::ScaleTooLarge: return "ScaleTooLarge";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::SingularFit: return "SingularFit";
    case ErrorCode::AllSegmentsExcluded: return "AllSegmentsExcluded";
    case ErrorCode::InsufficientScales: return "InsufficientScales";
    case ErrorCode::NonFiniteSurface: return "NonFiniteSurface";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::EmbeddingNotPositive: return "EmbeddingNotPositive";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace smfdfa
