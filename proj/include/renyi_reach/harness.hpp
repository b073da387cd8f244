#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "renyi_reach/divergences.hpp"
#include "renyi_reach/linalg.hpp"
#include "renyi_reach/spectral_bounds.hpp"

namespace renyi_reach {

/// Where the initial (rho_S, rho_E) of each trial come from.
struct StateSource {
  enum class Kind { Explicit, Random };

  Kind kind = Kind::Random;
  DensityEnsemble ensemble = DensityEnsemble::HilbertSchmidt;
  std::optional<DensityMatrix> rho_s;      ///< Explicit
  std::optional<DensityMatrix> rho_e;      ///< Explicit
  std::optional<Spectrum> spectrum_s;      ///< Random + FixedSpectrum
  std::optional<Spectrum> spectrum_e;      ///< Random + FixedSpectrum

  static StateSource explicit_states(DensityMatrix rho_s, DensityMatrix rho_e);
  static StateSource hilbert_schmidt();
};

struct VerifyConfig {
  std::size_t d_s = 2;
  std::size_t d_e = 2;
  std::vector<double> alpha_grid{0.5, 0.9, 1.5, 2.0};
  std::size_t trials = 1000;
  RngSeed seed{};
  StateSource state_source{};
  std::size_t povm_outcomes = 2;
  double tolerance = 1e-9;
  unsigned threads = 1;
  /// Keep every per-trial row; summaries are computed either way.
  bool keep_rows = true;

  /// Errors: InvalidConfig.
  void validate() const;
};

enum class Quantity { Petz, Sandwiched, Bures, Majorization, Tur, Chi2Chain };

std::string_view to_string(Quantity q);

/// One checked inequality instance. margin is the slack in the direction of
/// the inequality (positive = satisfied): bound - measured for upper bounds,
/// measured - bound for lower bounds.
struct TrialReport {
  std::int64_t trial = 0;  ///< -1 marks the extremal-unitary row
  Quantity quantity = Quantity::Petz;
  double alpha = 0.0;      ///< NaN when not applicable
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool violation = false;
  bool skipped = false;    ///< vacuous instance (zero mean shift)
};

struct QuantitySummary {
  std::size_t rows = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  double min_margin = 0.0;
  std::int64_t worst_trial = 0;
};

struct CampaignReport {
  std::vector<TrialReport> rows;
  std::map<Quantity, QuantitySummary> summary;
  std::size_t trials = 0;
  std::size_t violations = 0;
};

/// Initial states for trial `trial` (streams derived from the seed only).
std::pair<DensityMatrix, DensityMatrix> trial_states(const VerifyConfig& cfg, std::uint64_t trial);

/// sigma_S = Tr_E[U (rho_S (x) rho_E) U^dagger]. Errors: DimensionMismatch.
DensityMatrix evolve(const DensityMatrix& rho_s, const DensityMatrix& rho_e, const UnitaryMatrix& u);

/// Petz, sandwiched and Bures rows for one (states, U).
std::vector<TrialReport> divergence_trial(const DensityMatrix& rho_s, const DensityMatrix& rho_e,
                                          const UnitaryMatrix& u, std::span<const double> alphas,
                                          std::int64_t trial, double tolerance);

/// Relative-variance row plus the D_2 >= ln(1 + chi^2) chain row.
std::vector<TrialReport> tur_trial(const DensityMatrix& rho_s, const DensityMatrix& rho_e,
                                   const UnitaryMatrix& u, const Povm& povm, std::int64_t trial,
                                   double tolerance);

/// Majorization row: measured = min_k (prefix of optimal - prefix of lambda(sigma_S)).
TrialReport majorization_trial(const DensityMatrix& rho_s, const DensityMatrix& rho_e,
                               const UnitaryMatrix& u, std::int64_t trial);

CampaignReport verify_divergence_bound(const VerifyConfig& cfg);
CampaignReport verify_majorization(const VerifyConfig& cfg);
CampaignReport verify_tur(const VerifyConfig& cfg);

/// Recompute per-quantity summaries and the violation total from rows.
void summarize(CampaignReport& report);

// ---------------------------------------------------------------------------
// tightness probe

struct ProbeBudget {
  std::size_t restarts = 20;
  std::size_t evaluations_per_restart = 4000;
  double initial_step = 0.5;
  double min_step = 1e-6;
};

struct ProbeResult {
  double alpha = 2.0;
  double best_value = 0.0;
  double bound = 0.0;
  double gap = 0.0;  ///< bound - best_value
  std::size_t best_restart = 0;
  std::vector<double> parameters;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
  bool violation = false;  ///< gap < -1e-8
};

/// Generalized Gell-Mann basis (d^2 - 1 traceless elements plus the identity).
std::vector<ComplexMatrix> gell_mann_basis(std::size_t dim);

/// Maximizes D_alpha(rho_S || sigma_S(U)) over U = exp(-i H(p)) U_0 by
/// coordinate search with a shrinking step, restarting from Haar draws U_0.
ProbeResult probe_tightness(const VerifyConfig& cfg, const ProbeBudget& budget, double alpha);

// ---------------------------------------------------------------------------
// estimation experiment

struct EstimationConfig {
  DensityMatrix rho_s;
  DensityMatrix rho_e;
  ComplexMatrix generator;  ///< Hermitian on the joint space; U(theta) = exp(-i theta G)
  Povm povm;
  double theta_true = 0.3;
  double theta_0 = 0.0;
  double grid_min = -1.0;
  double grid_max = 1.0;
  double grid_step = 0.005;
  int repetitions = 1;
  std::size_t shots = 100000;
  RngSeed seed{};
  bool swap_generator = true;  ///< recorded in reports

  /// SWAP generator (needs d_S = d_E), computational-basis POVM, grid theta_0 +- 1.
  static EstimationConfig swap_default(DensityMatrix rho_s, DensityMatrix rho_e);
};

struct EstimationReport {
  int repetitions = 0;
  std::size_t shots = 0;
  double theta_true = 0.0;
  double theta_0 = 0.0;
  double mean_theta = 0.0;
  double mean_theta0 = 0.0;
  double var_theta = 0.0;
  double mse_theta = 0.0;
  double bias_sq = 0.0;
  double mean_shift_sq = 0.0;
  double lhs_var = 0.0;
  double lhs_mse = 0.0;
  double se_var = 0.0;
  double se_mse = 0.0;
  double rhs = 0.0;
  double exact_lhs_var = 0.0;  ///< NaN unless outcome enumeration was feasible
  double exact_lhs_mse = 0.0;
  double d2 = 0.0;             ///< D_2(rho_S || sigma_S(theta_true))
  double chain_lhs = 0.0;      ///< R * d2
  double chain_rhs = 0.0;      ///< ln(1 + 1/(lhs_var + 3 se_var))
  bool chain_ok = true;
  double mse_identity_residual = 0.0;
  double boundary_fraction = 0.0;
  bool grid_too_coarse = false;
  bool vacuous = false;        ///< zero mean shift
  bool violation = false;
};

std::vector<double> make_grid(double min, double max, double step);

/// sigma_S(theta) for the configured generator.
DensityMatrix evolve_parameterized(const EstimationConfig& cfg, double theta);

/// argmax over the grid of sum_r ln P(m_r | theta'); ties go to the smallest
/// grid value. Errors: AllZeroLikelihood.
double mle_grid_estimator(std::span<const double> samples,
                          const std::function<OutcomeDistribution(double)>& model,
                          std::span<const double> grid);

/// Errors: InvalidConfig (bad grid, sigma_S(theta_0) != rho_S, dimensions).
EstimationReport run_estimation(const EstimationConfig& cfg);

}  // namespace renyi_reach
