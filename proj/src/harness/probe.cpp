#include <cmath>
#include <limits>

#include "renyi_reach/error.hpp"
#include "renyi_reach/harness.hpp"

namespace renyi_reach {

namespace {

constexpr double kViolationGap = -1e-8;

ComplexMatrix hamiltonian(const std::vector<ComplexMatrix>& basis, const std::vector<double>& p) {
  ComplexMatrix h(basis.front().rows(), basis.front().cols());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (p[j] != 0.0) h += basis[j] * cdouble(p[j]);
  }
  return h;
}

}  // namespace

std::vector<ComplexMatrix> gell_mann_basis(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidConfig, "Gell-Mann basis needs dim >= 1");
  std::vector<ComplexMatrix> out;
  out.reserve(dim * dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j + 1; k < dim; ++k) {
      ComplexMatrix sym(dim, dim);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      out.push_back(std::move(sym));
      ComplexMatrix anti(dim, dim);
      anti(j, k) = cdouble(0.0, -1.0);
      anti(k, j) = cdouble(0.0, 1.0);
      out.push_back(std::move(anti));
    }
  }
  for (std::size_t l = 1; l < dim; ++l) {
    ComplexMatrix diag(dim, dim);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -scale * static_cast<double>(l);
    out.push_back(std::move(diag));
  }
  out.push_back(ComplexMatrix::identity(dim));
  return out;
}

ProbeResult probe_tightness(const VerifyConfig& cfg, const ProbeBudget& budget, double alpha) {
  cfg.validate();
  require_renyi_alpha(alpha);
  const auto [rho_s, rho_e] = trial_states(cfg, 0);
  const std::size_t joint = cfg.d_s * cfg.d_e;
  const auto basis = gell_mann_basis(joint);
  const std::size_t restarts = std::max<std::size_t>(1, budget.restarts);

  ProbeResult result;
  result.alpha = alpha;
  result.bound = divergence_bound(spectrum_of(rho_s), spectrum_of(rho_e), alpha);
  result.best_value = -std::numeric_limits<double>::infinity();

  for (std::size_t r = 0; r < restarts; ++r) {
    const UnitaryMatrix u0 = haar_unitary(joint, cfg.seed.with_stream(r));
    std::size_t used = 0;
    auto objective = [&](const std::vector<double>& p) {
      ++used;
      const ComplexMatrix u = unitary_exp(hamiltonian(basis, p), 1.0).matrix() * u0.matrix();
      return petz_renyi(rho_s, evolve(rho_s, rho_e, UnitaryMatrix::from_matrix(u)), alpha).value;
    };

    std::vector<double> p(basis.size(), 0.0);
    double value = petz_renyi(rho_s, evolve(rho_s, rho_e, u0), alpha).value;
    ++used;
    double step = budget.initial_step;
    bool exhausted = false;
    while (step >= budget.min_step) {
      bool improved = false;
      for (std::size_t j = 0; j < p.size() && !exhausted; ++j) {
        for (double sign : {1.0, -1.0}) {
          if (used >= budget.evaluations_per_restart) {
            exhausted = true;
            break;
          }
          std::vector<double> trial = p;
          trial[j] += sign * step;
          const double v = objective(trial);
          if (v > value) {
            value = v;
            p = std::move(trial);
            improved = true;
            break;
          }
        }
      }
      if (exhausted) break;
      if (!improved) step *= 0.5;
    }
    result.evaluations += used;
    result.budget_exhausted = result.budget_exhausted || exhausted;
    if (value > result.best_value) {
      result.best_value = value;
      result.best_restart = r;
      result.parameters = p;
    }
  }
  result.gap = result.best_value == result.bound ? 0.0 : result.bound - result.best_value;
  result.violation = result.gap < kViolationGap;
  return result;
}

}  // namespace renyi_reach
