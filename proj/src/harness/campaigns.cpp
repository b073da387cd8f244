#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "renyi_reach/error.hpp"
#include "renyi_reach/harness.hpp"

namespace renyi_reach {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinMeanShift = 1e-8;

// Rng lanes within one trial stream.
constexpr std::uint64_t kLaneUnitary = 0;
constexpr std::uint64_t kLaneSystem = 1;
constexpr std::uint64_t kLaneEnvironment = 2;
constexpr std::uint64_t kLanePovm = 3;

double upper_margin(double measured, double bound) {
  if (measured == bound) return 0.0;  // also covers inf == inf
  return bound - measured;
}

TrialReport upper_row(std::int64_t trial, Quantity q, double alpha, double measured, double bound,
                      double tolerance) {
  TrialReport r{trial, q, alpha, measured, bound, upper_margin(measured, bound), false, false};
  r.violation = std::isnan(r.margin) || r.margin < -tolerance;
  return r;
}

// Runs fn(trial) for trial in [0, n) on `threads` workers; slot i holds the
// rows of trial i so the merged order never depends on scheduling.
std::vector<TrialReport> run_trials(std::size_t n, unsigned threads,
                                    const std::function<std::vector<TrialReport>(std::uint64_t)>& fn) {
  std::vector<std::vector<TrialReport>> slots(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) slots[i] = fn(i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) slots[i] = fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<TrialReport> rows;
  for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
  return rows;
}

CampaignReport finish(const VerifyConfig& cfg, std::vector<TrialReport> rows) {
  CampaignReport report;
  report.trials = cfg.trials;
  report.rows = std::move(rows);
  summarize(report);
  if (!cfg.keep_rows) {
    std::vector<TrialReport> kept;
    for (const auto& r : report.rows) {
      if (r.violation || r.trial < 0) kept.push_back(r);
    }
    report.rows = std::move(kept);
  }
  return report;
}

}  // namespace

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::Petz: return "petz";
    case Quantity::Sandwiched: return "sandwiched";
    case Quantity::Bures: return "bures";
    case Quantity::Majorization: return "majorization";
    case Quantity::Tur: return "tur";
    case Quantity::Chi2Chain: return "chi2_chain";
  }
  return "unknown";
}

StateSource StateSource::explicit_states(DensityMatrix rho_s, DensityMatrix rho_e) {
  StateSource s;
  s.kind = Kind::Explicit;
  s.rho_s = std::move(rho_s);
  s.rho_e = std::move(rho_e);
  return s;
}

StateSource StateSource::hilbert_schmidt() { return {}; }

void VerifyConfig::validate() const {
  if (d_s == 0 || d_e == 0) throw Error(ErrorCode::InvalidConfig, "d_s and d_e must be positive");
  if (d_s * d_e > 64) throw Error(ErrorCode::InvalidConfig, "joint dimension above 64 is unsupported");
  for (double a : alpha_grid) {
    if (!std::isfinite(a) || a <= 0.0 || a == 1.0) {
      throw Error(ErrorCode::InvalidConfig, "alpha_grid values must lie in (0,1) or (1,inf)", a);
    }
  }
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::InvalidConfig, "tolerance must be nonnegative");
  if (state_source.kind == StateSource::Kind::Explicit) {
    if (!state_source.rho_s || !state_source.rho_e) {
      throw Error(ErrorCode::InvalidConfig, "explicit state source needs rho_s and rho_e");
    }
    if (state_source.rho_s->dim() != d_s || state_source.rho_e->dim() != d_e) {
      throw Error(ErrorCode::InvalidConfig, "explicit states do not match d_s/d_e");
    }
  } else if (state_source.ensemble == DensityEnsemble::FixedSpectrum) {
    if (!state_source.spectrum_s || !state_source.spectrum_e ||
        state_source.spectrum_s->size() != d_s || state_source.spectrum_e->size() != d_e) {
      throw Error(ErrorCode::InvalidConfig, "fixed-spectrum source needs spectra of size d_s/d_e");
    }
  }
}

std::pair<DensityMatrix, DensityMatrix> trial_states(const VerifyConfig& cfg, std::uint64_t trial) {
  const StateSource& src = cfg.state_source;
  if (src.kind == StateSource::Kind::Explicit) return {*src.rho_s, *src.rho_e};
  const RngSeed stream = cfg.seed.with_stream(trial);
  Rng rs(stream, kLaneSystem);
  Rng re(stream, kLaneEnvironment);
  if (src.ensemble == DensityEnsemble::FixedSpectrum) {
    return {random_density_fixed(*src.spectrum_s, rs), random_density_fixed(*src.spectrum_e, re)};
  }
  return {random_density_hs(cfg.d_s, rs), random_density_hs(cfg.d_e, re)};
}

DensityMatrix evolve(const DensityMatrix& rho_s, const DensityMatrix& rho_e, const UnitaryMatrix& u) {
  if (u.dim() != rho_s.dim() * rho_e.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "joint unitary does not match d_S * d_E");
  }
  const ComplexMatrix joint = conjugate_by(u.matrix(), tensor_product(rho_s.matrix(), rho_e.matrix()));
  return validate_density(partial_trace_env(joint, rho_s.dim(), rho_e.dim()));
}

std::vector<TrialReport> divergence_trial(const DensityMatrix& rho_s, const DensityMatrix& rho_e,
                                          const UnitaryMatrix& u, std::span<const double> alphas,
                                          std::int64_t trial, double tolerance) {
  const DensityMatrix sigma = evolve(rho_s, rho_e, u);
  const Spectrum ls = spectrum_of(rho_s);
  const Spectrum le = spectrum_of(rho_e);
  std::vector<TrialReport> rows;
  rows.reserve(2 * alphas.size() + 1);
  for (double alpha : alphas) {
    const double bound = divergence_bound(ls, le, alpha);
    rows.push_back(upper_row(trial, Quantity::Petz, alpha, petz_renyi(rho_s, sigma, alpha).value,
                             bound, tolerance));
    rows.push_back(upper_row(trial, Quantity::Sandwiched, alpha,
                             sandwiched_renyi(rho_s, sigma, alpha).value, bound, tolerance));
  }
  rows.push_back(upper_row(trial, Quantity::Bures, kNaN, bures_angle(rho_s, sigma),
                           bures_bound(ls, le), tolerance));
  return rows;
}

std::vector<TrialReport> tur_trial(const DensityMatrix& rho_s, const DensityMatrix& rho_e,
                                   const UnitaryMatrix& u, const Povm& povm, std::int64_t trial,
                                   double tolerance) {
  const DensityMatrix sigma = evolve(rho_s, rho_e, u);
  const auto p_rho = measurement_distribution(rho_s, povm);
  const auto p_sigma = measurement_distribution(sigma, povm);
  const double bound = tur_bound(spectrum_of(rho_s), spectrum_of(rho_e));

  std::vector<TrialReport> rows;
  const double shift = p_sigma.mean() - p_rho.mean();
  TrialReport tur{trial, Quantity::Tur, kNaN, 0.0, bound, 0.0, false, false};
  if (std::abs(shift) < kMinMeanShift) {
    tur.skipped = true;
    tur.measured = std::numeric_limits<double>::infinity();
    tur.margin = 0.0;
  } else {
    tur.measured = p_sigma.variance() / (shift * shift);
    tur.margin = tur.measured == tur.bound ? 0.0 : tur.measured - tur.bound;
    tur.violation = std::isnan(tur.margin) || tur.margin < -tolerance;
  }
  rows.push_back(tur);

  const double chain = std::log1p(chi_squared(p_rho, p_sigma).value);
  rows.push_back(upper_row(trial, Quantity::Chi2Chain, 2.0, chain,
                           petz_renyi(rho_s, sigma, 2.0).value, tolerance));
  return rows;
}

TrialReport majorization_trial(const DensityMatrix& rho_s, const DensityMatrix& rho_e,
                               const UnitaryMatrix& u, std::int64_t trial) {
  const DensityMatrix sigma = evolve(rho_s, rho_e, u);
  const ProbVector optimal = optimal_spectrum(spectrum_of(rho_s), spectrum_of(rho_e));
  const ProbVector reached = ProbVector::create(spectrum_of(sigma).values());
  const auto top = optimal.descending();
  const auto got = reached.descending();
  double gap = std::numeric_limits<double>::infinity();
  double a = 0.0;
  double b = 0.0;
  for (std::size_t k = 0; k < top.size(); ++k) {
    a += top[k];
    b += got[k];
    gap = std::min(gap, a - b);
  }
  TrialReport r{trial, Quantity::Majorization, kNaN, gap, 0.0, gap, false, false};
  r.violation = !majorizes(optimal, reached);
  return r;
}

void summarize(CampaignReport& report) {
  report.summary.clear();
  report.violations = 0;
  for (const auto& r : report.rows) {
    auto [it, inserted] = report.summary.try_emplace(r.quantity);
    QuantitySummary& s = it->second;
    if (inserted || (!r.skipped && r.margin < s.min_margin)) {
      s.min_margin = r.skipped ? std::numeric_limits<double>::infinity() : r.margin;
      s.worst_trial = r.trial;
    }
    ++s.rows;
    if (r.skipped) ++s.skipped;
    if (r.violation) {
      ++s.violations;
      ++report.violations;
    }
  }
}

CampaignReport verify_divergence_bound(const VerifyConfig& cfg) {
  cfg.validate();
  const std::size_t joint = cfg.d_s * cfg.d_e;
  auto rows = run_trials(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    const auto [rho_s, rho_e] = trial_states(cfg, t);
    Rng ru(cfg.seed.with_stream(t), kLaneUnitary);
    return divergence_trial(rho_s, rho_e, haar_unitary(joint, ru), cfg.alpha_grid,
                            static_cast<std::int64_t>(t), cfg.tolerance);
  });
  if (cfg.trials > 0) {
    const auto [rho_s, rho_e] = trial_states(cfg, 0);
    auto sat = divergence_trial(rho_s, rho_e, extremal_unitary(rho_s, rho_e), cfg.alpha_grid, -1,
                                cfg.tolerance);
    rows.insert(rows.end(), sat.begin(), sat.end());
  }
  return finish(cfg, std::move(rows));
}

CampaignReport verify_majorization(const VerifyConfig& cfg) {
  cfg.validate();
  const std::size_t joint = cfg.d_s * cfg.d_e;
  auto rows = run_trials(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    const auto [rho_s, rho_e] = trial_states(cfg, t);
    Rng ru(cfg.seed.with_stream(t), kLaneUnitary);
    return std::vector<TrialReport>{
        majorization_trial(rho_s, rho_e, haar_unitary(joint, ru), static_cast<std::int64_t>(t))};
  });
  if (cfg.trials > 0) {
    // Extremal row: prefix sums must coincide, so the worst gap is checked
    // against cfg.tolerance in both directions.
    const auto [rho_s, rho_e] = trial_states(cfg, 0);
    TrialReport r = majorization_trial(rho_s, rho_e, extremal_unitary(rho_s, rho_e), -1);
    const DensityMatrix sigma = evolve(rho_s, rho_e, extremal_unitary(rho_s, rho_e));
    const auto top = optimal_spectrum(spectrum_of(rho_s), spectrum_of(rho_e)).descending();
    const auto got = spectrum_of(sigma).descending();
    double a = 0.0, b = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < top.size(); ++k) {
      a += top[k];
      b += got[k];
      worst = std::max(worst, std::abs(a - b));
    }
    r.measured = worst;
    r.bound = cfg.tolerance;
    r.margin = cfg.tolerance - worst;
    r.violation = r.violation || r.margin < 0.0;
    rows.push_back(r);
  }
  return finish(cfg, std::move(rows));
}

CampaignReport verify_tur(const VerifyConfig& cfg) {
  cfg.validate();
  if (cfg.povm_outcomes < 2) throw Error(ErrorCode::InvalidConfig, "povm_outcomes must be >= 2");
  const std::size_t joint = cfg.d_s * cfg.d_e;
  auto rows = run_trials(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    const auto [rho_s, rho_e] = trial_states(cfg, t);
    Rng ru(cfg.seed.with_stream(t), kLaneUnitary);
    const UnitaryMatrix u = haar_unitary(joint, ru);
    Rng rp(cfg.seed.with_stream(t), kLanePovm);
    const Povm povm = random_povm(cfg.d_s, cfg.povm_outcomes, rp);
    return tur_trial(rho_s, rho_e, u, povm, static_cast<std::int64_t>(t), cfg.tolerance);
  });
  return finish(cfg, std::move(rows));
}

}  // namespace renyi_reach
