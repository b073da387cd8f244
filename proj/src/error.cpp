#include "renyi_reach/error.hpp"

#include <cstdio>

namespace renyi_reach {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::SingularNormalizer: return "SingularNormalizer";
    case ErrorCode::AlphaOutOfDomain: return "AlphaOutOfDomain";
    case ErrorCode::OutcomeMismatch: return "OutcomeMismatch";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::AllZeroLikelihood: return "AllZeroLikelihood";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message, double residual) {
  std::string out(to_string(code));
  out += ": ";
  out += message;
  if (residual != 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " (residual %.3e)", residual);
    out += buf;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, double residual)
    : std::runtime_error(compose(code, message, residual)), code_(code), residual_(residual) {}

}  // namespace renyi_reach
