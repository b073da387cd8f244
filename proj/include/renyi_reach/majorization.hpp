#pragma once

#include <vector>

#include "renyi_reach/matrix.hpp"

namespace renyi_reach {

/// Nonnegative vector summing to 1 within 1e-10.
class ProbVector {
 public:
  /// Errors: InvalidSpectrum.
  static ProbVector create(std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::vector<double> descending() const;
  [[nodiscard]] std::vector<double> ascending() const;

 private:
  explicit ProbVector(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

/// x majorizes y: descending prefix sums of x dominate those of y (slack
/// 1e-10) and the totals agree. The shorter vector is padded with zeros.
bool majorizes(const ProbVector& x, const ProbVector& y);

/// sum_n (a_n ascending)^alpha (x_n descending)^(1-alpha). A zero a_n
/// contributes 0; a positive a_n against a zero x_n gives +inf for alpha > 1
/// and 0 for alpha < 1. Errors: DimensionMismatch, AlphaOutOfDomain.
double pairing_function(const ProbVector& a, const ProbVector& x, double alpha);

/// Whether (1/(alpha-1)) ln f(x) >= (1/(alpha-1)) ln f(y) - 1e-10 for the
/// pairing function f against a. Errors: PreconditionViolated unless x
/// majorizes y.
bool schur_direction_check(const ProbVector& a, const ProbVector& x, const ProbVector& y,
                           double alpha);

struct VonNeumannSandwich {
  double lower;  ///< sum lambda_up(A) lambda_down(B)
  double mid;    ///< Tr[AB]
  double upper;  ///< sum lambda_up(A) lambda_up(B)
};

VonNeumannSandwich von_neumann_check(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigenvalues of M majorize its diagonal, both shifted by the same multiple
/// of the identity to be nonnegative and normalized by the shifted trace.
/// Errors: NotSquare, NotHermitian.
bool schur_horn_check(const ComplexMatrix& m);

}  // namespace renyi_reach
