#include "mpnormal/error.hpp"

namespace mpnormal {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CommutationViolated: return "CommutationViolated";
    case ErrorCode::InvalidBlock: return "InvalidBlock";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::DivergentTail: return "DivergentTail";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::ProbeInSpectrum: return "ProbeInSpectrum";
    case ErrorCode::SingularStencil: return "SingularStencil";
    case ErrorCode::BoundaryNotZero: return "BoundaryNotZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::OrderError: return "OrderError";
  }
  return "Unknown";
}

}  // namespace mpnormal
