#include "renyi_reach/spectral_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "renyi_reach/divergences.hpp"
#include "renyi_reach/error.hpp"

namespace renyi_reach {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Spectrum as_spectrum(const ProbVector& p) { return Spectrum::from_values(p.values()); }

ProbVector as_prob(const Spectrum& s) { return ProbVector::create(s.values()); }

}  // namespace

JointSpectrum joint_spectrum(const Spectrum& lambda_s, const Spectrum& lambda_e) {
  JointSpectrum out{{}, lambda_s.size(), lambda_e.size()};
  out.values.reserve(out.d_s * out.d_e);
  for (double a : lambda_s.values()) {
    for (double b : lambda_e.values()) out.values.push_back(a * b);
  }
  std::stable_sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

std::vector<double> block_sums(const JointSpectrum& joint) {
  std::vector<double> c(joint.d_s);
  double running = 0.0;
  for (std::size_t k = 0; k < joint.d_s; ++k) {
    for (std::size_t n = k * joint.d_e; n < (k + 1) * joint.d_e; ++n) running += joint.values[n];
    c[k] = running;
  }
  return c;
}

ProbVector optimal_spectrum(const std::vector<double>& c_sums) {
  std::vector<double> diffs(c_sums.size());
  double previous = 0.0;  // C_0
  for (std::size_t k = 0; k < c_sums.size(); ++k) {
    diffs[k] = std::max(0.0, c_sums[k] - previous);
    previous = c_sums[k];
  }
  return ProbVector::create(std::move(diffs));
}

ProbVector optimal_spectrum(const Spectrum& lambda_s, const Spectrum& lambda_e) {
  return optimal_spectrum(block_sums(joint_spectrum(lambda_s, lambda_e)));
}

double eigen_divergence_bound(const Spectrum& lambda_rho, const Spectrum& lambda_sigma,
                              double alpha) {
  require_renyi_alpha(alpha);
  if (lambda_rho.size() != lambda_sigma.size()) {
    throw Error(ErrorCode::DimensionMismatch, "spectra differ in length");
  }
  return renyi_log(pairing_function(as_prob(lambda_rho), as_prob(lambda_sigma), alpha), alpha);
}

double divergence_bound(const Spectrum& lambda_s, const Spectrum& lambda_e, double alpha) {
  return eigen_divergence_bound(lambda_s, as_spectrum(optimal_spectrum(lambda_s, lambda_e)), alpha);
}

double bures_bound(const Spectrum& lambda_s, const Spectrum& lambda_e) {
  // The alpha = 1/2 pairing sum is the fidelity bound sum_n sqrt(a_n up * b_n down).
  const double overlap =
      pairing_function(as_prob(lambda_s), optimal_spectrum(lambda_s, lambda_e), 0.5);
  return std::acos(std::clamp(overlap, 0.0, 1.0));
}

double second_moment_ratio(const Spectrum& lambda_s, const Spectrum& lambda_e) {
  return pairing_function(as_prob(lambda_s), optimal_spectrum(lambda_s, lambda_e), 2.0);
}

double tur_bound(const Spectrum& lambda_s, const Spectrum& lambda_e) {
  return estimator_bound(lambda_s, lambda_e, 1);
}

double estimator_bound(const Spectrum& lambda_s, const Spectrum& lambda_e, int repetitions) {
  if (repetitions < 1) throw Error(ErrorCode::InvalidConfig, "repetition count must be >= 1");
  const double ratio = second_moment_ratio(lambda_s, lambda_e);
  if (std::isinf(ratio)) return 0.0;
  const double bracket = (repetitions == 1 ? ratio : std::pow(ratio, repetitions)) - 1.0;
  if (bracket <= 0.0) return kInf;
  return 1.0 / bracket;
}

UnitaryMatrix extremal_unitary(const DensityMatrix& rho_s, const DensityMatrix& rho_e) {
  const auto es = hermitian_eig(rho_s.matrix());
  const auto ee = hermitian_eig(rho_e.matrix());
  const std::size_t ds = rho_s.dim();
  const std::size_t de = rho_e.dim();
  const std::size_t n = ds * de;

  // Joint eigenbasis index i_S * d_E + i_E; order joint eigenvalues descending.
  std::vector<std::size_t> joint(n);
  std::iota(joint.begin(), joint.end(), 0);
  auto joint_value = [&](std::size_t idx) {
    return std::max(es.values[idx / de], 0.0) * std::max(ee.values[idx % de], 0.0);
  };
  std::stable_sort(joint.begin(), joint.end(),
                   [&](std::size_t x, std::size_t y) { return joint_value(x) > joint_value(y); });
  ComplexMatrix permutation(n, n);
  for (std::size_t k = 0; k < n; ++k) permutation(k, joint[k]) = 1.0;

  // Block k (k-th largest reduced eigenvalue) goes onto the eigenvector of the
  // k-th smallest eigenvalue of rho_S.
  std::vector<std::size_t> ascending(ds);
  std::iota(ascending.begin(), ascending.end(), 0);
  std::stable_sort(ascending.begin(), ascending.end(),
                   [&](std::size_t x, std::size_t y) { return es.values[x] < es.values[y]; });
  ComplexMatrix align(ds, ds);
  for (std::size_t k = 0; k < ds; ++k) {
    for (std::size_t r = 0; r < ds; ++r) align(r, k) = es.vectors(r, ascending[k]);
  }

  const ComplexMatrix basis = tensor_product(es.vectors, ee.vectors);
  const ComplexMatrix u =
      multiply_adjoint(tensor_product(align, ComplexMatrix::identity(de)) * permutation, basis);
  return UnitaryMatrix::from_matrix(u);
}

BoundSet compute_bounds(const Spectrum& lambda_s, const Spectrum& lambda_e, double alpha,
                        const std::vector<int>& repetitions) {
  BoundSet out;
  out.c_sums = block_sums(joint_spectrum(lambda_s, lambda_e));
  out.optimal_spectrum = optimal_spectrum(out.c_sums).values();
  out.alpha = alpha;
  out.divergence_bound = divergence_bound(lambda_s, lambda_e, alpha);
  out.bures_bound = bures_bound(lambda_s, lambda_e);
  out.tur_bound = tur_bound(lambda_s, lambda_e);
  for (int r : repetitions) out.estimator_bounds[r] = estimator_bound(lambda_s, lambda_e, r);
  return out;
}

}  // namespace renyi_reach
