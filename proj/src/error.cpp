#include "farkas/error.hpp"

namespace farkas {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace farkas
