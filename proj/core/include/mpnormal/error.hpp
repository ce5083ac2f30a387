#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpnormal {

enum class ErrorCode {
  InvalidArgument,
  NonHermitian,
  DimensionMismatch,
  CommutationViolated,
  InvalidBlock,
  EmptySpectrum,
  DivergentTail,
  BadExponent,
  ProbeInSpectrum,
  SingularStencil,
  BoundaryNotZero,
  ParseError,
  ValidationError,
  OrderError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// command line driver can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mpnormal
