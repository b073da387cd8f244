#pragma once

// Dynamics-independent bounds computed from the initial system and
// environment spectra alone. Every reachable system state
// sigma_S = Tr_E[U (rho_S (x) rho_E) U^dagger] has a spectrum majorized by the
// "optimal" spectrum obtained by sorting the joint eigenvalues in decreasing
// order and summing consecutive blocks of d_E of them. Pairing that spectrum
// anti-aligned against rho_S gives the largest reachable Renyi divergence and
// from it the Bures-angle, relative-variance and estimator-variance limits.

#include <cstddef>
#include <map>
#include <vector>

#include "renyi_reach/linalg.hpp"
#include "renyi_reach/majorization.hpp"

namespace renyi_reach {

/// Joint eigenvalues lambda_S (x) lambda_E, sorted descending.
struct JointSpectrum {
  std::vector<double> values;
  std::size_t d_s = 0;
  std::size_t d_e = 0;
};

struct BoundSet {
  std::vector<double> c_sums;            ///< C_1..C_{d_S}
  std::vector<double> optimal_spectrum;  ///< successive differences of c_sums
  double alpha = 2.0;
  double divergence_bound = 0.0;  ///< nats, may be +inf
  double bures_bound = 0.0;       ///< radians
  double tur_bound = 0.0;         ///< may be +inf (no change possible)
  std::map<int, double> estimator_bounds;
};

JointSpectrum joint_spectrum(const Spectrum& lambda_s, const Spectrum& lambda_e);

/// C_k = sum of the k * d_E largest joint eigenvalues, k = 1..d_S.
std::vector<double> block_sums(const JointSpectrum& joint);

/// [C_1, C_2 - C_1, ...], nonincreasing.
ProbVector optimal_spectrum(const std::vector<double>& c_sums);

/// Shortcut: optimal_spectrum(block_sums(joint_spectrum(lambda_s, lambda_e))).
ProbVector optimal_spectrum(const Spectrum& lambda_s, const Spectrum& lambda_e);

/// (1/(alpha-1)) ln sum_n (a_n up)^alpha (b_n down)^(1-alpha): the largest
/// Petz divergence between states with spectra a and b.
double eigen_divergence_bound(const Spectrum& lambda_rho, const Spectrum& lambda_sigma, double alpha);

/// Upper bound on D_alpha(rho_S || sigma_S) over every joint unitary.
double divergence_bound(const Spectrum& lambda_s, const Spectrum& lambda_e, double alpha);

/// Upper bound on the Bures angle between rho_S and any reachable sigma_S.
double bures_bound(const Spectrum& lambda_s, const Spectrum& lambda_e);

/// sum_n (lambda_n up)^2 / (C_n - C_{n-1}); +inf if a positive eigenvalue
/// meets an empty block.
double second_moment_ratio(const Spectrum& lambda_s, const Spectrum& lambda_e);

/// Lower bound on Var_sigma[M] / (E_sigma[M] - E_rho[M])^2 for any POVM.
/// 0 when the ratio sum is infinite, +inf when the bracket vanishes.
double tur_bound(const Spectrum& lambda_s, const Spectrum& lambda_e);

/// Lower bound on Var[theta_hat_R] / (E_theta - E_theta0)^2 with R repetitions.
double estimator_bound(const Spectrum& lambda_s, const Spectrum& lambda_e, int repetitions);

/// Joint unitary whose output sigma_S has the optimal spectrum, commutes with
/// rho_S and is anti-aligned with it, so it attains divergence_bound.
UnitaryMatrix extremal_unitary(const DensityMatrix& rho_s, const DensityMatrix& rho_e);

BoundSet compute_bounds(const Spectrum& lambda_s, const Spectrum& lambda_e, double alpha,
                        const std::vector<int>& repetitions);

}  // namespace renyi_reach
