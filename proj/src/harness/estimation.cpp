#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "renyi_reach/error.hpp"
#include "renyi_reach/harness.hpp"
#include "renyi_reach/kernels.hpp"

namespace renyi_reach {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinShiftSq = 1e-8;
constexpr double kStateMatch = 1e-9;
constexpr double kBoundaryLimit = 0.01;
constexpr double kTieTolerance = 1e-12;
constexpr double kStandardErrors = 3.0;
constexpr std::size_t kMaxEnumeration = 200000;

// ln P(o | theta_g) stored outcome-major: column o is contiguous over the grid.
struct LogLikelihoodTable {
  std::size_t grid_size = 0;
  std::vector<std::vector<double>> columns;
};

LogLikelihoodTable tabulate(const std::function<OutcomeDistribution(double)>& model,
                            std::span<const double> grid, std::size_t outcomes) {
  LogLikelihoodTable t{grid.size(), std::vector<std::vector<double>>(outcomes,
                                                                     std::vector<double>(grid.size()))};
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto dist = model(grid[g]);
    if (dist.size() != outcomes) throw Error(ErrorCode::OutcomeMismatch, "model outcome count changed");
    for (std::size_t o = 0; o < outcomes; ++o) {
      const double p = dist.probabilities()[o];
      t.columns[o][g] = p > 0.0 ? std::log(p) : -kInf;
    }
  }
  return t;
}

// First grid index within kTieTolerance of the maximal log-likelihood.
std::size_t best_index(const LogLikelihoodTable& t, std::span<const std::size_t> counts) {
  const auto& k = kernels::active();
  std::vector<double> ll(t.grid_size, 0.0);
  for (std::size_t o = 0; o < counts.size(); ++o) {
    if (counts[o] == 0) continue;
    k.axpy(t.grid_size, static_cast<double>(counts[o]), t.columns[o].data(), ll.data());
  }
  for (double& v : ll) {
    if (std::isnan(v)) v = -kInf;
  }
  const std::size_t top = k.argmax(ll.size(), ll.data());
  const double best = ll[top];
  if (best == -kInf) throw Error(ErrorCode::AllZeroLikelihood, "every grid point has zero likelihood");
  const double cut = best - kTieTolerance * (1.0 + std::abs(best));
  for (std::size_t g = 0; g < top; ++g) {
    if (ll[g] >= cut) return g;
  }
  return top;
}

std::size_t sample_outcome(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> cumulative(const OutcomeDistribution& d) {
  std::vector<double> c(d.size());
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    s += d.probabilities()[i];
    c[i] = s;
  }
  return c;
}

// Calls fn(counts, multinomial probability) for every count vector with R draws.
void enumerate_counts(std::size_t outcomes, int draws, const std::vector<double>& p,
                      const std::function<void(const std::vector<std::size_t>&, double)>& fn) {
  std::vector<std::size_t> counts(outcomes, 0);
  const auto log_fact = [](double n) { return std::lgamma(n + 1.0); };
  std::function<void(std::size_t, int)> rec = [&](std::size_t o, int left) {
    if (o + 1 == outcomes) {
      counts[o] = static_cast<std::size_t>(left);
      double lp = log_fact(draws);
      for (std::size_t i = 0; i < outcomes; ++i) {
        if (counts[i] == 0) continue;
        if (p[i] <= 0.0) return;
        lp += static_cast<double>(counts[i]) * std::log(p[i]) - log_fact(static_cast<double>(counts[i]));
      }
      fn(counts, std::exp(lp));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[o] = static_cast<std::size_t>(c);
      rec(o + 1, left - c);
    }
  };
  rec(0, draws);
}

double binomial(double n, double k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

struct RatioStats {
  double ratio;
  double se;
};

// Delta-method standard error of mean(a) / mean(d)^2 from paired samples.
RatioStats ratio_with_se(const std::vector<double>& a, const std::vector<double>& d) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, md = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    md += d[i];
  }
  ma /= n;
  md /= n;
  const double r = ma / (md * md);
  double s2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double psi = (a[i] - ma) / (md * md) - 2.0 * r / md * (d[i] - md);
    s2 += psi * psi;
  }
  const double se = a.size() > 1 ? std::sqrt(s2 / (n - 1.0) / n) : kInf;
  return {r, se};
}

}  // namespace

EstimationConfig EstimationConfig::swap_default(DensityMatrix rho_s, DensityMatrix rho_e) {
  if (rho_s.dim() != rho_e.dim()) {
    throw Error(ErrorCode::InvalidConfig, "SWAP generator needs d_S = d_E");
  }
  const std::size_t d = rho_s.dim();
  return EstimationConfig{std::move(rho_s), std::move(rho_e), swap_operator(d),
                          Povm::computational_basis(d)};
}

std::vector<double> make_grid(double min, double max, double step) {
  if (!std::isfinite(min) || !std::isfinite(max) || !(step > 0.0) || max < min) {
    throw Error(ErrorCode::InvalidConfig, "grid needs finite min <= max and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = min + static_cast<double>(i) * step;
  return g;
}

DensityMatrix evolve_parameterized(const EstimationConfig& cfg, double theta) {
  return evolve(cfg.rho_s, cfg.rho_e, unitary_exp(cfg.generator, theta));
}

double mle_grid_estimator(std::span<const double> samples,
                          const std::function<OutcomeDistribution(double)>& model,
                          std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty estimator grid");
  const auto reference = model(grid.front());
  const auto& labels = reference.outcomes();
  std::vector<std::size_t> counts(labels.size(), 0);
  for (double s : samples) {
    const auto it = std::find(labels.begin(), labels.end(), s);
    if (it == labels.end()) throw Error(ErrorCode::OutcomeMismatch, "sample is not an outcome label", s);
    ++counts[static_cast<std::size_t>(it - labels.begin())];
  }
  return grid[best_index(tabulate(model, grid, labels.size()), counts)];
}

EstimationReport run_estimation(const EstimationConfig& cfg) {
  const std::size_t joint = cfg.rho_s.dim() * cfg.rho_e.dim();
  if (cfg.generator.rows() != joint || cfg.generator.cols() != joint) {
    throw Error(ErrorCode::InvalidConfig, "generator must act on the joint space");
  }
  if (cfg.povm.dim() != cfg.rho_s.dim()) {
    throw Error(ErrorCode::InvalidConfig, "POVM must act on the system");
  }
  if (cfg.repetitions < 1) throw Error(ErrorCode::InvalidConfig, "repetitions must be >= 1");
  if (cfg.shots < 2) throw Error(ErrorCode::InvalidConfig, "shots must be >= 2");
  const auto grid = make_grid(cfg.grid_min, cfg.grid_max, cfg.grid_step);
  for (double t : {cfg.theta_true, cfg.theta_0}) {
    if (t < cfg.grid_min - 1e-12 || t > cfg.grid_max + 1e-12) {
      throw Error(ErrorCode::InvalidConfig, "grid must contain theta_true and theta_0", t);
    }
  }
  const DensityMatrix sigma0 = evolve_parameterized(cfg, cfg.theta_0);
  const double mismatch = max_abs_diff(sigma0.matrix(), cfg.rho_s.matrix());
  if (mismatch > kStateMatch) {
    throw Error(ErrorCode::InvalidConfig, "sigma_S(theta_0) differs from rho_S", mismatch);
  }
  const DensityMatrix sigma = evolve_parameterized(cfg, cfg.theta_true);

  const std::size_t k = cfg.povm.size();
  const auto model = [&](double theta) {
    return measurement_distribution(evolve_parameterized(cfg, theta), cfg.povm);
  };
  const LogLikelihoodTable table = tabulate(model, grid, k);
  std::map<std::vector<std::size_t>, std::size_t> memo;
  const auto estimate = [&](const std::vector<std::size_t>& counts) {
    auto it = memo.find(counts);
    if (it == memo.end()) it = memo.emplace(counts, best_index(table, counts)).first;
    return it->second;
  };

  const auto p_true = measurement_distribution(sigma, cfg.povm);
  const auto p_zero = measurement_distribution(sigma0, cfg.povm);
  const auto cdf_true = cumulative(p_true);
  const auto cdf_zero = cumulative(p_zero);

  EstimationReport rep;
  rep.repetitions = cfg.repetitions;
  rep.shots = cfg.shots;
  rep.theta_true = cfg.theta_true;
  rep.theta_0 = cfg.theta_0;
  rep.rhs = estimator_bound(spectrum_of(cfg.rho_s), spectrum_of(cfg.rho_e), cfg.repetitions);
  rep.d2 = petz_renyi(cfg.rho_s, sigma, 2.0).value;
  rep.chain_lhs = static_cast<double>(cfg.repetitions) * rep.d2;

  // Common random numbers: shot i uses the same uniforms at theta and theta_0,
  // so the mean shift is estimated from paired differences.
  Rng rng(cfg.seed, 0);
  std::vector<double> at_true(cfg.shots);
  std::vector<double> at_zero(cfg.shots);
  std::vector<std::size_t> c1(k), c0(k);
  std::size_t pinned = 0;
  for (std::size_t s = 0; s < cfg.shots; ++s) {
    std::fill(c1.begin(), c1.end(), 0);
    std::fill(c0.begin(), c0.end(), 0);
    for (int r = 0; r < cfg.repetitions; ++r) {
      const double u = rng.uniform();
      ++c1[sample_outcome(cdf_true, u)];
      ++c0[sample_outcome(cdf_zero, u)];
    }
    const std::size_t g1 = estimate(c1);
    const std::size_t g0 = estimate(c0);
    at_true[s] = grid[g1];
    at_zero[s] = grid[g0];
    if (g1 == 0 || g1 + 1 == grid.size()) ++pinned;
  }

  const double n = static_cast<double>(cfg.shots);
  double m1 = 0.0, m0 = 0.0;
  for (std::size_t s = 0; s < cfg.shots; ++s) {
    m1 += at_true[s];
    m0 += at_zero[s];
  }
  m1 /= n;
  m0 /= n;
  double var = 0.0, mse = 0.0;
  std::vector<double> sq_dev(cfg.shots), sq_err(cfg.shots), diff(cfg.shots);
  for (std::size_t s = 0; s < cfg.shots; ++s) {
    sq_dev[s] = (at_true[s] - m1) * (at_true[s] - m1);
    sq_err[s] = (at_true[s] - cfg.theta_true) * (at_true[s] - cfg.theta_true);
    diff[s] = at_true[s] - at_zero[s];
    var += sq_dev[s];
    mse += sq_err[s];
  }
  var /= n;
  mse /= n;
  rep.mean_theta = m1;
  rep.mean_theta0 = m0;
  rep.var_theta = var;
  rep.mse_theta = mse;
  rep.bias_sq = (m1 - cfg.theta_true) * (m1 - cfg.theta_true);
  rep.mse_identity_residual = std::abs(mse - (var + rep.bias_sq));
  rep.mean_shift_sq = (m1 - m0) * (m1 - m0);
  rep.boundary_fraction = static_cast<double>(pinned) / n;
  rep.grid_too_coarse = rep.boundary_fraction > kBoundaryLimit;

  // Exact moments by enumerating outcome count vectors.
  rep.exact_lhs_var = kNaN;
  rep.exact_lhs_mse = kNaN;
  if (binomial(static_cast<double>(cfg.repetitions + k - 1), static_cast<double>(k - 1)) <=
      static_cast<double>(kMaxEnumeration)) {
    double e1 = 0.0, e1sq = 0.0, e0 = 0.0;
    enumerate_counts(k, cfg.repetitions, p_true.probabilities(),
                     [&](const std::vector<std::size_t>& c, double w) {
                       const double t = grid[estimate(c)];
                       e1 += w * t;
                       e1sq += w * t * t;
                     });
    enumerate_counts(k, cfg.repetitions, p_zero.probabilities(),
                     [&](const std::vector<std::size_t>& c, double w) { e0 += w * grid[estimate(c)]; });
    const double shift_sq = (e1 - e0) * (e1 - e0);
    if (shift_sq >= kMinShiftSq) {
      const double exact_var = std::max(0.0, e1sq - e1 * e1);
      rep.exact_lhs_var = exact_var / shift_sq;
      rep.exact_lhs_mse = (exact_var + (e1 - cfg.theta_true) * (e1 - cfg.theta_true)) / shift_sq;
    }
  }

  if (rep.mean_shift_sq < kMinShiftSq) {
    rep.vacuous = true;
    rep.lhs_var = rep.lhs_mse = kInf;
    rep.se_var = rep.se_mse = 0.0;
    rep.chain_rhs = 0.0;
    rep.chain_ok = true;
    return rep;
  }
  const RatioStats rv = ratio_with_se(sq_dev, diff);
  const RatioStats rm = ratio_with_se(sq_err, diff);
  rep.lhs_var = rv.ratio;
  rep.lhs_mse = rm.ratio;
  rep.se_var = rv.se;
  rep.se_mse = rm.se;
  rep.violation = rep.lhs_var + kStandardErrors * rep.se_var < rep.rhs ||
                  rep.lhs_mse + kStandardErrors * rep.se_mse < rep.rhs;
  rep.chain_rhs = std::log1p(1.0 / (rep.lhs_var + kStandardErrors * rep.se_var));
  rep.chain_ok = rep.chain_lhs >= rep.chain_rhs - 1e-9;
  return rep;
}

}  // namespace renyi_reach
