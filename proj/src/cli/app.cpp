#include "renyi_reach/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "renyi_reach/error.hpp"
#include "renyi_reach/harness.hpp"

namespace renyi_reach::cli {

namespace {

using io::Json;

constexpr double kSaturationTolerance = 1e-8;

/// Usage or configuration problem tied to one input field.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message) {}
};

struct Settings {
  std::vector<double> lambda_s;
  std::vector<double> lambda_e;
  std::optional<ComplexMatrix> rho_s;
  std::optional<ComplexMatrix> rho_e;
  std::string ensemble = "hilbert_schmidt";
  std::vector<double> spectrum_s;
  std::vector<double> spectrum_e;
  std::vector<std::size_t> d_s{2};
  std::vector<std::size_t> d_e{2};
  std::vector<double> alphas;
  bool alphas_given = false;
  std::vector<int> repetitions{1};
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t stream = 0;
  double tolerance = 1e-9;
  unsigned threads = 1;
  std::size_t povm_outcomes = 2;
  bool keep_rows = true;
  double theta_true = 0.3;
  double theta_0 = 0.0;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  double grid_step = 0.005;
  std::size_t shots = 100000;
  std::optional<ComplexMatrix> generator;
  ProbeBudget budget;
  std::size_t samples = 1;
  int r_max = 4;
  std::string format = "json";
  std::string output;
};

struct Outcome {
  Json report;
  io::Table table;
  bool violation = false;
};

template <typename T>
T field(const Json& j, const char* name) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw UsageError(name, e.what());
  }
}

template <typename T>
std::vector<T> scalar_or_list(const Json& j, const char* name) {
  if (j.is_array()) return field<std::vector<T>>(j, name);
  return {field<T>(j, name)};
}

ComplexMatrix matrix_from_json(const Json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw UsageError(name, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  std::vector<cdouble> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw UsageError(name, "rows differ in length");
    for (const auto& x : row) {
      if (x.is_number()) {
        entries.emplace_back(x.get<double>(), 0.0);
      } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
        entries.emplace_back(x[0].get<double>(), x[1].get<double>());
      } else {
        throw UsageError(name, "entries must be numbers or [re, im] pairs");
      }
    }
  }
  return {rows, cols, std::move(entries)};
}

void apply_state_source(const Json& src, Settings& s) {
  for (const auto& [key, value] : src.items()) {
    if (key == "kind") {
      const auto kind = field<std::string>(value, "state_source.kind");
      if (kind != "explicit" && kind != "random") {
        throw UsageError("state_source.kind", "expected 'explicit' or 'random'");
      }
    } else if (key == "ensemble") {
      s.ensemble = field<std::string>(value, "state_source.ensemble");
    } else if (key == "lambda_s") {
      s.lambda_s = field<std::vector<double>>(value, "state_source.lambda_s");
    } else if (key == "lambda_e") {
      s.lambda_e = field<std::vector<double>>(value, "state_source.lambda_e");
    } else if (key == "rho_s") {
      s.rho_s = matrix_from_json(value, "state_source.rho_s");
    } else if (key == "rho_e") {
      s.rho_e = matrix_from_json(value, "state_source.rho_e");
    } else if (key == "spectrum_s") {
      s.spectrum_s = field<std::vector<double>>(value, "state_source.spectrum_s");
    } else if (key == "spectrum_e") {
      s.spectrum_e = field<std::vector<double>>(value, "state_source.spectrum_e");
    } else {
      throw UsageError("state_source." + key, "unknown field");
    }
  }
}

void apply_config(const Json& j, Settings& s) {
  if (!j.is_object()) throw UsageError("config", "top level must be an object");
  for (const auto& [key, v] : j.items()) {
    const char* k = key.c_str();
    if (key == "state_source") apply_state_source(v, s);
    else if (key == "lambda_s") s.lambda_s = field<std::vector<double>>(v, k);
    else if (key == "lambda_e") s.lambda_e = field<std::vector<double>>(v, k);
    else if (key == "d_s") s.d_s = scalar_or_list<std::size_t>(v, k);
    else if (key == "d_e") s.d_e = scalar_or_list<std::size_t>(v, k);
    else if (key == "alpha_grid") {
      s.alphas = scalar_or_list<double>(v, k);
      s.alphas_given = true;
    } else if (key == "repetitions") s.repetitions = scalar_or_list<int>(v, k);
    else if (key == "trials") s.trials = field<std::size_t>(v, k);
    else if (key == "seed") {
      s.seed = field<std::uint64_t>(v, k);
      s.seed_given = true;
    } else if (key == "stream") s.stream = field<std::uint64_t>(v, k);
    else if (key == "tolerance") s.tolerance = field<double>(v, k);
    else if (key == "threads") s.threads = field<unsigned>(v, k);
    else if (key == "povm_outcomes") s.povm_outcomes = field<std::size_t>(v, k);
    else if (key == "keep_rows") s.keep_rows = field<bool>(v, k);
    else if (key == "theta_true") s.theta_true = field<double>(v, k);
    else if (key == "theta_0") s.theta_0 = field<double>(v, k);
    else if (key == "grid_min") s.grid_min = field<double>(v, k);
    else if (key == "grid_max") s.grid_max = field<double>(v, k);
    else if (key == "grid_step") s.grid_step = field<double>(v, k);
    else if (key == "shots") s.shots = field<std::size_t>(v, k);
    else if (key == "generator") s.generator = matrix_from_json(v, k);
    else if (key == "restarts") s.budget.restarts = field<std::size_t>(v, k);
    else if (key == "evaluations_per_restart") s.budget.evaluations_per_restart = field<std::size_t>(v, k);
    else if (key == "initial_step") s.budget.initial_step = field<double>(v, k);
    else if (key == "min_step") s.budget.min_step = field<double>(v, k);
    else if (key == "samples") s.samples = field<std::size_t>(v, k);
    else if (key == "r_max") s.r_max = field<int>(v, k);
    else throw UsageError(key, "unknown config field");
  }
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config", "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw UsageError("config", e.what());
  }
}

Spectrum spectrum_field(const std::string& name, const std::vector<double>& values) {
  try {
    return Spectrum::from_values(values);
  } catch (const Error& e) {
    throw UsageError(name, e.what());
  }
}

std::pair<Spectrum, Spectrum> required_spectra(const Settings& s) {
  if (s.lambda_s.empty()) throw UsageError("lambda-s", "required");
  if (s.lambda_e.empty()) throw UsageError("lambda-e", "required");
  return {spectrum_field("lambda-s", s.lambda_s), spectrum_field("lambda-e", s.lambda_e)};
}

/// Explicit states from lambdas or matrices, if any were given.
std::optional<std::pair<DensityMatrix, DensityMatrix>> explicit_states(const Settings& s) {
  const bool have_lambda = !s.lambda_s.empty() || !s.lambda_e.empty();
  const bool have_rho = s.rho_s.has_value() || s.rho_e.has_value();
  if (!have_lambda && !have_rho) return std::nullopt;
  auto one = [](const std::vector<double>& lambda, const std::optional<ComplexMatrix>& rho,
                const std::string& name) {
    try {
      if (!lambda.empty()) {
        spectrum_field(name, lambda);
        return DensityMatrix::diagonal(lambda);
      }
      if (rho) return validate_density(*rho);
    } catch (const Error& e) {
      throw UsageError(name, e.what());
    }
    throw UsageError(name, "required with explicit states");
  };
  return std::pair{one(s.lambda_s, s.rho_s, "lambda-s"), one(s.lambda_e, s.rho_e, "lambda-e")};
}

std::size_t single(const std::vector<std::size_t>& v, const char* name) {
  if (v.size() != 1) throw UsageError(name, "expected a single value");
  return v.front();
}

VerifyConfig verify_config(const Settings& s) {
  VerifyConfig cfg;
  cfg.alpha_grid = s.alphas_given ? s.alphas : std::vector<double>{0.5, 0.9, 1.5, 2.0};
  cfg.trials = s.trials;
  cfg.seed = RngSeed{s.seed, s.stream};
  cfg.povm_outcomes = s.povm_outcomes;
  cfg.tolerance = s.tolerance;
  cfg.threads = s.threads;
  cfg.keep_rows = s.keep_rows;
  if (auto states = explicit_states(s)) {
    cfg.d_s = states->first.dim();
    cfg.d_e = states->second.dim();
    cfg.state_source = StateSource::explicit_states(states->first, states->second);
  } else {
    cfg.d_s = single(s.d_s, "ds");
    cfg.d_e = single(s.d_e, "de");
    if (s.ensemble == "fixed_spectrum") {
      cfg.state_source.ensemble = DensityEnsemble::FixedSpectrum;
      cfg.state_source.spectrum_s = spectrum_field("spectrum_s", s.spectrum_s);
      cfg.state_source.spectrum_e = spectrum_field("spectrum_e", s.spectrum_e);
    } else if (s.ensemble != "hilbert_schmidt") {
      throw UsageError("ensemble", "expected 'hilbert_schmidt' or 'fixed_spectrum'");
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError("config", e.what());
  }
  return cfg;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(io::number(x));
  return a;
}

Json config_echo(const VerifyConfig& cfg) {
  Json j;
  j["d_s"] = cfg.d_s;
  j["d_e"] = cfg.d_e;
  j["alpha_grid"] = numbers(cfg.alpha_grid);
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed.seed;
  j["stream"] = cfg.seed.stream;
  j["tolerance"] = io::number(cfg.tolerance);
  const bool expl = cfg.state_source.kind == StateSource::Kind::Explicit;
  j["state_source"] = expl ? "explicit"
                      : cfg.state_source.ensemble == DensityEnsemble::FixedSpectrum
                          ? "fixed_spectrum"
                          : "hilbert_schmidt";
  if (expl) {
    j["lambda_s"] = numbers(spectrum_of(*cfg.state_source.rho_s).values());
    j["lambda_e"] = numbers(spectrum_of(*cfg.state_source.rho_e).values());
  }
  return j;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += io::format_number(v[i]);
  }
  return out;
}

Outcome cmd_bound(const Settings& s) {
  const auto [ls, le] = required_spectra(s);
  const auto alphas = s.alphas_given ? s.alphas : std::vector<double>{2.0};
  if (alphas.empty()) throw UsageError("alpha", "empty list");
  Outcome o;
  o.report["command"] = "bound";
  o.report["lambda_s"] = numbers(ls.values());
  o.report["lambda_e"] = numbers(le.values());
  Json bounds = Json::array();
  for (double a : alphas) {
    try {
      bounds.push_back(io::to_json(compute_bounds(ls, le, a, s.repetitions)));
    } catch (const Error& e) {
      throw UsageError(e.code() == ErrorCode::AlphaOutOfDomain ? "alpha" : "r", e.what());
    }
  }
  o.report["bounds"] = bounds;
  const int r_max = *std::max_element(s.repetitions.begin(), s.repetitions.end());
  o.table = sweep_table(alphas, {{s.lambda_s, s.lambda_e}}, r_max);
  return o;
}

Outcome cmd_verify(const Settings& s) {
  const VerifyConfig cfg = verify_config(s);
  const CampaignReport div = verify_divergence_bound(cfg);
  const CampaignReport maj = verify_majorization(cfg);
  Outcome o;
  o.report["command"] = "verify";
  o.report["config"] = config_echo(cfg);
  o.report["divergence"] = io::to_json(div);
  o.report["majorization"] = io::to_json(maj);
  o.violation = div.violations + maj.violations > 0;
  CampaignReport all = div;
  all.rows.insert(all.rows.end(), maj.rows.begin(), maj.rows.end());
  o.table = io::campaign_table(all);
  return o;
}

Outcome cmd_tur(const Settings& s) {
  const VerifyConfig cfg = verify_config(s);
  const CampaignReport rep = verify_tur(cfg);
  Outcome o;
  o.report["command"] = "tur";
  o.report["config"] = config_echo(cfg);
  o.report["povm_outcomes"] = cfg.povm_outcomes;
  if (cfg.state_source.kind == StateSource::Kind::Explicit) {
    o.report["tur_bound"] = io::number(
        tur_bound(spectrum_of(*cfg.state_source.rho_s), spectrum_of(*cfg.state_source.rho_e)));
  }
  o.report["campaign"] = io::to_json(rep);
  o.violation = rep.violations > 0;
  o.table = io::campaign_table(rep);
  return o;
}

Outcome cmd_estimate(const Settings& s) {
  auto states = explicit_states(s);
  if (!states) throw UsageError("lambda-s", "estimate needs explicit states");
  EstimationConfig base = [&] {
    if (s.generator) {
      return EstimationConfig{states->first, states->second, *s.generator,
                              Povm::computational_basis(states->first.dim())};
    }
    try {
      return EstimationConfig::swap_default(states->first, states->second);
    } catch (const Error& e) {
      throw UsageError("lambda-e", e.what());
    }
  }();
  base.swap_generator = !s.generator.has_value();
  base.theta_true = s.theta_true;
  base.theta_0 = s.theta_0;
  base.grid_min = s.grid_min.value_or(s.theta_0 - 1.0);
  base.grid_max = s.grid_max.value_or(s.theta_0 + 1.0);
  base.grid_step = s.grid_step;
  base.shots = s.shots;
  base.seed = RngSeed{s.seed, s.stream};

  Outcome o;
  o.report["command"] = "estimate";
  o.report["lambda_s"] = numbers(spectrum_of(states->first).values());
  o.report["lambda_e"] = numbers(spectrum_of(states->second).values());
  o.report["generator"] = base.swap_generator ? "swap" : "custom";
  o.report["povm"] = "computational_basis";
  o.report["estimator"] = "grid_mle";
  o.report["grid"] = numbers({base.grid_min, base.grid_max, base.grid_step});
  Json runs = Json::array();
  o.table.header = {"repetitions", "shots", "theta_true", "mean_theta", "mean_theta0", "var_theta",
                    "mse_theta", "lhs_var", "se_var", "lhs_mse", "se_mse", "rhs", "vacuous",
                    "violation"};
  for (int r : s.repetitions) {
    EstimationConfig cfg = base;
    cfg.repetitions = r;
    EstimationReport rep;
    try {
      rep = run_estimation(cfg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidConfig) throw;
      throw UsageError("estimate", e.what());
    }
    runs.push_back(io::to_json(rep));
    o.violation = o.violation || rep.violation || !rep.chain_ok;
    auto f = io::format_number;
    o.table.rows.push_back({std::to_string(r), std::to_string(rep.shots), f(rep.theta_true),
                            f(rep.mean_theta), f(rep.mean_theta0), f(rep.var_theta),
                            f(rep.mse_theta), f(rep.lhs_var), f(rep.se_var), f(rep.lhs_mse),
                            f(rep.se_mse), f(rep.rhs), rep.vacuous ? "true" : "false",
                            rep.violation ? "true" : "false"});
  }
  o.report["runs"] = runs;
  return o;
}

Outcome cmd_saturate(const Settings& s) {
  auto states = explicit_states(s);
  if (!states) throw UsageError("lambda-s", "saturate needs explicit states");
  const auto& [rho_s, rho_e] = *states;
  const auto alphas = s.alphas_given ? s.alphas : std::vector<double>{0.5, 0.9, 1.5, 2.0};
  if (alphas.empty()) throw UsageError("alpha", "empty list");
  const UnitaryMatrix u = extremal_unitary(rho_s, rho_e);
  const DensityMatrix sigma = evolve(rho_s, rho_e, u);
  const Spectrum ls = spectrum_of(rho_s);
  const Spectrum le = spectrum_of(rho_e);
  const auto optimal = optimal_spectrum(ls, le).descending();
  const auto reached = spectrum_of(sigma).descending();
  double spectrum_gap = 0.0;
  for (std::size_t k = 0; k < optimal.size(); ++k) {
    spectrum_gap = std::max(spectrum_gap, std::abs(optimal[k] - reached[k]));
  }

  Outcome o;
  o.report["command"] = "saturate";
  o.report["lambda_s"] = numbers(ls.values());
  o.report["lambda_e"] = numbers(le.values());
  o.report["optimal_spectrum"] = numbers(optimal);
  o.report["sigma_spectrum"] = numbers(reached);
  o.report["spectrum_gap"] = io::number(spectrum_gap);
  o.violation = spectrum_gap > kSaturationTolerance;
  Json rows = Json::array();
  o.table.header = {"alpha", "petz", "sandwiched", "bound", "gap"};
  for (double a : alphas) {
    double bound = 0.0;
    try {
      bound = divergence_bound(ls, le, a);
    } catch (const Error& e) {
      throw UsageError("alpha", e.what());
    }
    const double petz = petz_renyi(rho_s, sigma, a).value;
    const double sandwiched = sandwiched_renyi(rho_s, sigma, a).value;
    const double gap = petz == bound ? 0.0 : bound - petz;
    o.violation = o.violation || !(std::abs(gap) <= kSaturationTolerance);
    Json r;
    r["alpha"] = io::number(a);
    r["petz"] = io::number(petz);
    r["sandwiched"] = io::number(sandwiched);
    r["bound"] = io::number(bound);
    r["gap"] = io::number(gap);
    rows.push_back(r);
    auto f = io::format_number;
    o.table.rows.push_back({f(a), f(petz), f(sandwiched), f(bound), f(gap)});
  }
  o.report["alphas"] = rows;
  return o;
}

Outcome cmd_probe(const Settings& s) {
  const VerifyConfig cfg = verify_config(s);
  const auto alphas = s.alphas_given ? s.alphas : std::vector<double>{2.0};
  Outcome o;
  o.report["command"] = "probe";
  o.report["config"] = config_echo(cfg);
  Json b;
  b["restarts"] = s.budget.restarts;
  b["evaluations_per_restart"] = s.budget.evaluations_per_restart;
  b["initial_step"] = io::number(s.budget.initial_step);
  b["min_step"] = io::number(s.budget.min_step);
  o.report["budget"] = b;
  Json results = Json::array();
  o.table.header = {"alpha", "best_value", "bound", "gap", "best_restart", "evaluations",
                    "budget_exhausted", "violation"};
  for (double a : alphas) {
    const ProbeResult r = probe_tightness(cfg, s.budget, a);
    results.push_back(io::to_json(r));
    o.violation = o.violation || r.violation;
    auto f = io::format_number;
    o.table.rows.push_back({f(a), f(r.best_value), f(r.bound), f(r.gap),
                            std::to_string(r.best_restart), std::to_string(r.evaluations),
                            r.budget_exhausted ? "true" : "false", r.violation ? "true" : "false"});
  }
  o.report["results"] = results;
  return o;
}

Outcome cmd_sweep(const Settings& s) {
  if (!s.alphas_given || s.alphas.empty()) throw UsageError("alpha", "empty alpha range");
  if (s.r_max < 1) throw UsageError("r-max", "must be >= 1");
  std::vector<SpectrumPair> pairs;
  if (!s.lambda_s.empty() || !s.lambda_e.empty()) {
    required_spectra(s);
    pairs.push_back({s.lambda_s, s.lambda_e});
  } else {
    if (s.d_s.empty() || s.d_e.empty()) throw UsageError("ds", "empty dimension range");
    for (std::size_t ds : s.d_s) {
      for (std::size_t de : s.d_e) {
        VerifyConfig cfg;
        cfg.d_s = ds;
        cfg.d_e = de;
        cfg.alpha_grid = s.alphas;
        cfg.seed = RngSeed{s.seed, s.stream};
        try {
          cfg.validate();
        } catch (const Error& e) {
          throw UsageError("ds", e.what());
        }
        for (std::size_t k = 0; k < s.samples; ++k) {
          const auto [rs, re] = trial_states(cfg, k);
          pairs.push_back({spectrum_of(rs).values(), spectrum_of(re).values()});
        }
      }
    }
  }
  Outcome o;
  o.table = sweep_table(s.alphas, pairs, s.r_max);
  Json rows = Json::array();
  for (const auto& row : o.table.rows) {
    Json r;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& name = o.table.header[c];
      if (name == "lambda_s" || name == "lambda_e" || name == "d_s" || name == "d_e") {
        r[name] = row[c];
      } else {
        r[name] = io::number(io::parse_number(row[c]));
      }
    }
    rows.push_back(r);
  }
  o.report["command"] = "sweep";
  o.report["rows"] = rows;
  return o;
}

void write_output(const Settings& s, const std::string& text, std::ostream& out) {
  if (s.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(s.output, std::ios::binary);
  if (!f) throw UsageError("output", "cannot open '" + s.output + "'");
  f << text;
}

void add_state_options(CLI::App* sub, Settings& s) {
  sub->add_option("--lambda-s", s.lambda_s, "System spectrum, comma separated")->delimiter(',');
  sub->add_option("--lambda-e", s.lambda_e, "Environment spectrum, comma separated")->delimiter(',');
}

void add_campaign_options(CLI::App* sub, Settings& s) {
  add_state_options(sub, s);
  sub->add_option("--ds", s.d_s, "System dimension (random states)")->delimiter(',');
  sub->add_option("--de", s.d_e, "Environment dimension (random states)")->delimiter(',');
  sub->add_option("--trials", s.trials, "Number of Haar trials");
  sub->add_option("--threads", s.threads, "Worker threads");
  sub->add_option("--tolerance", s.tolerance, "Violation tolerance");
  sub->add_option("--ensemble", s.ensemble, "hilbert_schmidt or fixed_spectrum");
  sub->add_flag("!--summary-only", s.keep_rows, "Only keep violating and extremal rows");
}

}  // namespace

io::Table sweep_table(const std::vector<double>& alphas, const std::vector<SpectrumPair>& pairs,
                      int r_max) {
  io::Table t;
  t.header = {"alpha", "d_s", "d_e", "lambda_s", "lambda_e", "div_bound", "bures_bound", "tur_bound"};
  for (int r = 1; r <= r_max; ++r) t.header.push_back("est_bound_r" + std::to_string(r));
  for (double a : alphas) {
    for (const auto& p : pairs) {
      const Spectrum ls = Spectrum::from_values(p.lambda_s);
      const Spectrum le = Spectrum::from_values(p.lambda_e);
      std::vector<std::string> row{io::format_number(a), std::to_string(ls.size()),
                                   std::to_string(le.size()), join(ls.values()), join(le.values()),
                                   io::format_number(divergence_bound(ls, le, a)),
                                   io::format_number(bures_bound(ls, le)),
                                   io::format_number(tur_bound(ls, le))};
      for (int r = 1; r <= r_max; ++r) row.push_back(io::format_number(estimator_bound(ls, le, r)));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Dynamics-independent bounds for open quantum systems", "renyi-reach"};
  app.require_subcommand(1);
  std::string config_file;
  std::uint64_t seed_flag = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON config file; flags override its fields");
    sub->add_option("--output,-o", s.output, "Write the report here instead of stdout");
    sub->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed_flag, "Base seed (falls back to RENYI_REACH_SEED)");
    sub->add_option("--stream", s.stream, "Stream offset for single-run commands");
    sub->add_option("--alpha", s.alphas, "Renyi orders, comma separated")->delimiter(',');
  };

  auto* bound = app.add_subcommand("bound", "Bounds from spectra");
  common(bound);
  add_state_options(bound, s);
  bound->add_option("--r", s.repetitions, "Repetition counts")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "Haar campaign for divergence, Bures and majorization bounds");
  common(verify);
  add_campaign_options(verify, s);

  auto* tur = app.add_subcommand("tur", "Haar campaign for the relative-variance bound");
  common(tur);
  add_campaign_options(tur, s);
  tur->add_option("--povm-outcomes", s.povm_outcomes, "Outcomes of the random POVM");

  auto* estimate = app.add_subcommand("estimate", "Grid-MLE estimation experiment");
  common(estimate);
  add_state_options(estimate, s);
  estimate->add_option("--r", s.repetitions, "Repetition counts")->delimiter(',');
  estimate->add_option("--theta", s.theta_true, "True parameter");
  estimate->add_option("--theta0", s.theta_0, "Reference parameter");
  estimate->add_option("--shots", s.shots, "Monte-Carlo replications");
  estimate->add_option("--grid-step", s.grid_step, "Estimator grid step");
  double grid_min = 0.0, grid_max = 0.0;
  auto* gmin = estimate->add_option("--grid-min", grid_min, "Estimator grid minimum");
  auto* gmax = estimate->add_option("--grid-max", grid_max, "Estimator grid maximum");

  auto* saturate = app.add_subcommand("saturate", "Evaluate the extremal unitary");
  common(saturate);
  add_state_options(saturate, s);

  auto* probe = app.add_subcommand("probe", "Search for the largest reachable divergence");
  common(probe);
  add_campaign_options(probe, s);
  probe->add_option("--restarts", s.budget.restarts, "Multi-start count");
  probe->add_option("--evaluations", s.budget.evaluations_per_restart, "Evaluations per restart");
  probe->add_option("--initial-step", s.budget.initial_step, "Initial coordinate step");
  probe->add_option("--min-step", s.budget.min_step, "Smallest coordinate step");

  auto* sweep = app.add_subcommand("sweep", "Tabulate bounds over alpha and spectra");
  common(sweep);
  add_state_options(sweep, s);
  sweep->add_option("--ds", s.d_s, "System dimensions")->delimiter(',');
  sweep->add_option("--de", s.d_e, "Environment dimensions")->delimiter(',');
  sweep->add_option("--samples", s.samples, "Random spectrum pairs per dimension pair");
  sweep->add_option("--r-max", s.r_max, "Largest repetition count");

  try {
    // Config fields first so that explicit flags parsed below take precedence.
    const std::string path = config_path(args);
    if (!path.empty()) apply_config(load_json_file(path), s);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--alpha") > 0) s.alphas_given = true;
    if (sub->count("--seed") > 0) {
      s.seed = seed_flag;
      s.seed_given = true;
    }
    if (gmin->count() > 0) s.grid_min = grid_min;
    if (gmax->count() > 0) s.grid_max = grid_max;
    if (!s.seed_given) {
      if (const char* env = std::getenv("RENYI_REACH_SEED"); env != nullptr && *env != '\0') {
        try {
          std::size_t used = 0;
          s.seed = std::stoull(env, &used);
          if (used != std::string(env).size()) throw std::invalid_argument(env);
        } catch (const std::exception&) {
          throw UsageError("RENYI_REACH_SEED", "not an unsigned integer");
        }
      }
    }
    if (s.repetitions.empty()) throw UsageError("r", "empty list");
    for (int r : s.repetitions) {
      if (r < 1) throw UsageError("r", "repetition counts must be >= 1");
    }

    Outcome o;
    const std::string name = sub->get_name();
    if (name == "bound") o = cmd_bound(s);
    else if (name == "verify") o = cmd_verify(s);
    else if (name == "tur") o = cmd_tur(s);
    else if (name == "estimate") o = cmd_estimate(s);
    else if (name == "saturate") o = cmd_saturate(s);
    else if (name == "probe") o = cmd_probe(s);
    else o = cmd_sweep(s);

    write_output(s, s.format == "csv" ? io::to_csv(o.table) : io::dump(o.report), out);
    return o.violation ? kViolation : kOk;
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace renyi_reach::cli
