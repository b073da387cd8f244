#include "renyi_reach/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "renyi_reach/error.hpp"

namespace renyi_reach {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupport = 1e-12;

void require_same_dim(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "states act on different dimensions");
  }
}

void require_same_outcomes(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.outcomes() != q.outcomes()) {
    throw Error(ErrorCode::OutcomeMismatch, "distributions are over different outcome sets");
  }
}

// Weight of rho on the kernel of sigma: sum over null eigenvectors v of <v|rho|v>.
double weight_outside_support(const DensityMatrix& rho, const HermitianEigen& sigma_eig) {
  const ComplexMatrix& rm = rho.matrix();
  const std::size_t n = rm.rows();
  double w = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (sigma_eig.values[k] > kSupport) continue;
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cdouble row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += rm(i, j) * sigma_eig.vectors(j, k);
      acc += std::conj(sigma_eig.vectors(i, k)) * row;
    }
    w += acc.real();
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------

OutcomeDistribution OutcomeDistribution::create(std::vector<double> outcomes,
                                                std::vector<double> probabilities) {
  if (outcomes.size() != probabilities.size() || outcomes.empty()) {
    throw Error(ErrorCode::OutcomeMismatch, "need one probability per outcome");
  }
  std::vector<double> sorted = outcomes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::OutcomeMismatch, "outcome labels must be distinct");
  }
  double sum = 0.0;
  for (double& p : probabilities) {
    if (!std::isfinite(p) || p < -1e-12) {
      throw Error(ErrorCode::PreconditionViolated, "negative probability", p);
    }
    p = std::max(p, 0.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw Error(ErrorCode::PreconditionViolated, "probabilities do not sum to 1", sum - 1.0);
  }
  return OutcomeDistribution(std::move(outcomes), std::move(probabilities));
}

OutcomeDistribution OutcomeDistribution::from_probabilities(std::vector<double> probabilities) {
  std::vector<double> outcomes(probabilities.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) outcomes[i] = static_cast<double>(i);
  return create(std::move(outcomes), std::move(probabilities));
}

double OutcomeDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m += probabilities_[i] * outcomes_[i];
  return m;
}

double OutcomeDistribution::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double d = outcomes_[i] - m;
    v += probabilities_[i] * d * d;
  }
  return v;
}

DivergenceValue DivergenceValue::of(double raw) {
  if (raw < 0.0 && raw >= -1e-12) raw = 0.0;
  return {raw};
}

DivergenceValue DivergenceValue::infinite() { return {kInf}; }

bool DivergenceValue::finite() const noexcept { return std::isfinite(value); }

void require_renyi_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha == 1.0) {
    throw Error(ErrorCode::AlphaOutOfDomain, "alpha must lie in (0,1) or (1,inf)", alpha);
  }
}

double renyi_log(double t, double alpha) {
  const double scale = 1.0 / (alpha - 1.0);
  if (t <= 0.0) return alpha < 1.0 ? kInf : -kInf;
  if (std::isinf(t)) return alpha > 1.0 ? kInf : -kInf;
  return scale * std::log(t);
}

// ---------------------------------------------------------------------------

DivergenceValue petz_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
  require_same_dim(rho, sigma);
  require_renyi_alpha(alpha);
  const auto rho_eig = hermitian_eig(rho.matrix());
  const auto sigma_eig = hermitian_eig(sigma.matrix());
  if (alpha > 1.0 && weight_outside_support(rho, sigma_eig) > kSupport) {
    return DivergenceValue::infinite();
  }
  const ComplexMatrix a = spectral_power(rho_eig, alpha);
  const ComplexMatrix b = spectral_power(sigma_eig, 1.0 - alpha);
  return DivergenceValue::of(renyi_log(real_trace_product(a, b), alpha));
}

DivergenceValue sandwiched_renyi(const DensityMatrix& rho, const DensityMatrix& sigma,
                                 double alpha) {
  require_same_dim(rho, sigma);
  require_renyi_alpha(alpha);
  const auto sigma_eig = hermitian_eig(sigma.matrix());
  if (alpha > 1.0 && weight_outside_support(rho, sigma_eig) > kSupport) {
    return DivergenceValue::infinite();
  }
  const ComplexMatrix s = spectral_power(sigma_eig, (1.0 - alpha) / (2.0 * alpha));
  const ComplexMatrix inner = hermitian_part(s * rho.matrix() * s);
  const auto inner_eig = hermitian_eig(inner);
  double t = 0.0;
  for (double lambda : inner_eig.values) {
    if (lambda > 0.0) t += std::pow(lambda, alpha);
  }
  return DivergenceValue::of(renyi_log(t, alpha));
}

DivergenceValue quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const auto rho_eig = hermitian_eig(rho.matrix());
  const auto sigma_eig = hermitian_eig(sigma.matrix());
  if (weight_outside_support(rho, sigma_eig) > kSupport) return DivergenceValue::infinite();

  double entropy_term = 0.0;  // Tr[rho ln rho], 0 ln 0 = 0
  for (double lambda : rho_eig.values) {
    if (lambda > 0.0) entropy_term += lambda * std::log(lambda);
  }
  std::vector<cdouble> log_sigma(sigma_eig.values.size());
  for (std::size_t i = 0; i < log_sigma.size(); ++i) {
    log_sigma[i] = sigma_eig.values[i] > kSupport ? std::log(sigma_eig.values[i]) : 0.0;
  }
  const double cross = real_trace_product(rho.matrix(), spectral_reconstruct(sigma_eig.vectors, log_sigma));
  return DivergenceValue::of(entropy_term - cross);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const ComplexMatrix root = matrix_power_psd(rho.matrix(), 0.5);
  const auto eig = hermitian_eig(hermitian_part(root * sigma.matrix() * root));
  double s = 0.0;
  for (double lambda : eig.values) {
    if (lambda > 0.0) s += std::sqrt(lambda);
  }
  return std::clamp(s * s, 0.0, 1.0);
}

double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::acos(std::sqrt(fidelity(rho, sigma)));
}

DivergenceValue classical_renyi(const OutcomeDistribution& p, const OutcomeDistribution& q,
                                double alpha) {
  require_same_outcomes(p, q);
  require_renyi_alpha(alpha);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.probabilities()[i];
    const double qi = q.probabilities()[i];
    if (pi == 0.0) continue;
    if (qi == 0.0) {
      if (alpha > 1.0) return DivergenceValue::infinite();
      continue;
    }
    s += std::pow(pi, alpha) * std::pow(qi, 1.0 - alpha);
  }
  return DivergenceValue::of(renyi_log(s, alpha));
}

DivergenceValue chi_squared(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  require_same_outcomes(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.probabilities()[i];
    const double qi = q.probabilities()[i];
    if (qi == 0.0) {
      if (pi != 0.0) return DivergenceValue::infinite();
      continue;
    }
    const double d = pi - qi;
    s += d * d / qi;
  }
  return DivergenceValue::of(s);
}

OutcomeDistribution measurement_distribution(const DensityMatrix& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "POVM and state dimensions differ");
  }
  std::vector<double> probs(povm.size());
  double sum = 0.0;
  for (std::size_t m = 0; m < povm.size(); ++m) {
    probs[m] = std::max(0.0, real_trace_product(povm.elements()[m], rho.matrix()));
    sum += probs[m];
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw Error(ErrorCode::PreconditionViolated, "outcome probabilities do not sum to 1", sum - 1.0);
  }
  for (double& x : probs) x /= sum;
  return OutcomeDistribution::create(povm.outcomes(), std::move(probs));
}

Chi2Gap chi2_variational_gap(const OutcomeDistribution& p, const OutcomeDistribution& q,
                             std::span<const double> g) {
  require_same_outcomes(p, q);
  if (g.size() != p.size()) {
    throw Error(ErrorCode::OutcomeMismatch, "witness needs one value per outcome");
  }
  double mean_p = 0.0;
  double mean_q = 0.0;
  double g2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    mean_p += p.probabilities()[i] * g[i];
    mean_q += q.probabilities()[i] * g[i];
    g2 = std::max(g2, g[i] * g[i]);
  }
  double var_q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g[i] - mean_q;
    var_q += q.probabilities()[i] * d * d;
  }
  const double shift = mean_p - mean_q;
  const double lhs = chi_squared(p, q).value;
  if (var_q <= 1e-15 * (1.0 + g2)) {
    const bool means_equal = std::abs(shift) <= 1e-12 * (1.0 + std::sqrt(g2));
    return {lhs, means_equal ? 0.0 : kInf};
  }
  return {lhs, shift * shift / var_q};
}

Chi2Gap chi2_variational_gap(const OutcomeDistribution& p, const OutcomeDistribution& q,
                             const std::function<double(double)>& g) {
  std::vector<double> values(p.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = g(p.outcomes()[i]);
  return chi2_variational_gap(p, q, values);
}

}  // namespace renyi_reach
