#pragma once

#include <functional>
#include <span>
#include <vector>

#include "renyi_reach/linalg.hpp"

namespace renyi_reach {

/// Finite discrete distribution over distinct real outcome labels.
class OutcomeDistribution {
 public:
  /// Errors: OutcomeMismatch (length/labels), PreconditionViolated (negative
  /// entries beyond -1e-12 or sum off 1 by more than 1e-10).
  static OutcomeDistribution create(std::vector<double> outcomes, std::vector<double> probabilities);
  /// Outcomes 0..n-1.
  static OutcomeDistribution from_probabilities(std::vector<double> probabilities);

  [[nodiscard]] std::size_t size() const noexcept { return probabilities_.size(); }
  [[nodiscard]] const std::vector<double>& outcomes() const noexcept { return outcomes_; }
  [[nodiscard]] const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  [[nodiscard]] double mean() const;
  /// Central second moment sum_x P(x) (x - mean)^2.
  [[nodiscard]] double variance() const;

 private:
  OutcomeDistribution(std::vector<double> o, std::vector<double> p)
      : outcomes_(std::move(o)), probabilities_(std::move(p)) {}
  std::vector<double> outcomes_;
  std::vector<double> probabilities_;
};

/// Divergence in nats; +inf is representable. Values in [-1e-12, 0) are
/// clipped to 0.
struct DivergenceValue {
  double value = 0.0;

  static DivergenceValue of(double raw);
  static DivergenceValue infinite();
  [[nodiscard]] bool finite() const noexcept;
};

/// Throws AlphaOutOfDomain unless alpha is finite, > 0 and != 1.
void require_renyi_alpha(double alpha);

/// (1/(alpha-1)) ln(t) with ln 0 = -inf and ln inf = +inf carried through.
double renyi_log(double t, double alpha);

DivergenceValue petz_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha);
DivergenceValue sandwiched_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha);
DivergenceValue quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2, clipped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// arccos sqrt(Fid) in [0, pi/2].
double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma);

DivergenceValue classical_renyi(const OutcomeDistribution& p, const OutcomeDistribution& q,
                                double alpha);
DivergenceValue chi_squared(const OutcomeDistribution& p, const OutcomeDistribution& q);

/// P(m | rho) = Tr[M_m rho]. Errors: DimensionMismatch.
OutcomeDistribution measurement_distribution(const DensityMatrix& rho, const Povm& povm);

struct Chi2Gap {
  double lhs;  ///< chi^2(P || Q)
  double rhs;  ///< (E_P[g] - E_Q[g])^2 / Var_Q[g]
};

/// Both sides of the variational lower bound on chi^2. With Var_Q[g] = 0 the
/// rhs is +inf when the means differ and 0 when they agree.
Chi2Gap chi2_variational_gap(const OutcomeDistribution& p, const OutcomeDistribution& q,
                             std::span<const double> g);
Chi2Gap chi2_variational_gap(const OutcomeDistribution& p, const OutcomeDistribution& q,
                             const std::function<double(double)>& g);

}  // namespace renyi_reach
