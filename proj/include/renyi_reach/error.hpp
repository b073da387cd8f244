#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace renyi_reach {

enum class ErrorCode {
  NotSquare,
  NotHermitian,
  TraceNotOne,
  NotPositive,
  NotUnitary,
  NonFinite,
  ConvergenceFailure,
  DimensionMismatch,
  InvalidSpectrum,
  InvalidPovm,
  SingularNormalizer,
  AlphaOutOfDomain,
  OutcomeMismatch,
  PreconditionViolated,
  AllZeroLikelihood,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying the violated invariant and, when meaningful, the
/// measured residual that triggered it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, double residual = 0.0);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  double residual_;
};

}  // namespace renyi_reach
