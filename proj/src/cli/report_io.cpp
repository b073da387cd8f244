#include "renyi_reach/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace renyi_reach::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void dump_into(const Json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(key).dump();
        out += ": ";
        dump_into(value, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const auto& v : j) scalars = scalars && !v.is_structured();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(j[i], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(j[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string cell(double x) { return format_number(x); }

std::string cell(bool b) { return b ? "true" : "false"; }

Quantity quantity_from(const std::string& name) {
  for (Quantity q : {Quantity::Petz, Quantity::Sandwiched, Quantity::Bures, Quantity::Majorization,
                     Quantity::Tur, Quantity::Chi2Chain}) {
    if (to_string(q) == name) return q;
  }
  throw std::invalid_argument("unknown quantity '" + name + "'");
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  std::string s(buf);
  // Keep a JSON reader from treating integral values as integers.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

double parse_number(const std::string& text) {
  if (text == "inf") return kInf;
  if (text == "-inf") return -kInf;
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

Json number(double x) {
  if (std::isfinite(x)) return Json(x);
  return Json(format_number(x));
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>());
  throw std::invalid_argument("expected a number, got " + j.dump());
}

std::string dump(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  out += "\n";
  return out;
}

Json to_json(const BoundSet& b) {
  Json j;
  j["alpha"] = number(b.alpha);
  Json c = Json::array();
  for (double x : b.c_sums) c.push_back(number(x));
  j["c_sums"] = c;
  Json o = Json::array();
  for (double x : b.optimal_spectrum) o.push_back(number(x));
  j["optimal_spectrum"] = o;
  j["divergence_bound"] = number(b.divergence_bound);
  j["bures_bound"] = number(b.bures_bound);
  j["tur_bound"] = number(b.tur_bound);
  Json e = Json::object();
  for (const auto& [r, v] : b.estimator_bounds) e[std::to_string(r)] = number(v);
  j["estimator_bounds"] = e;
  return j;
}

BoundSet bound_set_from_json(const Json& j) {
  BoundSet b;
  b.alpha = number_from(j.at("alpha"));
  for (const auto& x : j.at("c_sums")) b.c_sums.push_back(number_from(x));
  for (const auto& x : j.at("optimal_spectrum")) b.optimal_spectrum.push_back(number_from(x));
  b.divergence_bound = number_from(j.at("divergence_bound"));
  b.bures_bound = number_from(j.at("bures_bound"));
  b.tur_bound = number_from(j.at("tur_bound"));
  for (const auto& [k, v] : j.at("estimator_bounds").items()) {
    b.estimator_bounds[std::stoi(k)] = number_from(v);
  }
  return b;
}

Json to_json(const TrialReport& r) {
  Json j;
  j["trial"] = r.trial;
  j["quantity"] = std::string(to_string(r.quantity));
  j["alpha"] = number(r.alpha);
  j["measured"] = number(r.measured);
  j["bound"] = number(r.bound);
  j["margin"] = number(r.margin);
  j["violation"] = r.violation;
  j["skipped"] = r.skipped;
  return j;
}

TrialReport trial_report_from_json(const Json& j) {
  TrialReport r;
  r.trial = j.at("trial").get<std::int64_t>();
  r.quantity = quantity_from(j.at("quantity").get<std::string>());
  r.alpha = number_from(j.at("alpha"));
  r.measured = number_from(j.at("measured"));
  r.bound = number_from(j.at("bound"));
  r.margin = number_from(j.at("margin"));
  r.violation = j.at("violation").get<bool>();
  r.skipped = j.at("skipped").get<bool>();
  return r;
}

Json to_json(const CampaignReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  Json s = Json::object();
  for (const auto& [q, qs] : r.summary) {
    Json e;
    e["rows"] = qs.rows;
    e["violations"] = qs.violations;
    e["skipped"] = qs.skipped;
    e["min_margin"] = number(qs.min_margin);
    e["worst_trial"] = qs.worst_trial;
    s[std::string(to_string(q))] = e;
  }
  j["summary"] = s;
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  j["rows"] = rows;
  return j;
}

CampaignReport campaign_from_json(const Json& j) {
  CampaignReport r;
  r.trials = j.at("trials").get<std::size_t>();
  r.violations = j.at("violations").get<std::size_t>();
  for (const auto& [name, e] : j.at("summary").items()) {
    QuantitySummary qs;
    qs.rows = e.at("rows").get<std::size_t>();
    qs.violations = e.at("violations").get<std::size_t>();
    qs.skipped = e.at("skipped").get<std::size_t>();
    qs.min_margin = number_from(e.at("min_margin"));
    qs.worst_trial = e.at("worst_trial").get<std::int64_t>();
    r.summary[quantity_from(name)] = qs;
  }
  for (const auto& row : j.at("rows")) r.rows.push_back(trial_report_from_json(row));
  return r;
}

Json to_json(const ProbeResult& r) {
  Json j;
  j["alpha"] = number(r.alpha);
  j["best_value"] = number(r.best_value);
  j["bound"] = number(r.bound);
  j["gap"] = number(r.gap);
  j["best_restart"] = r.best_restart;
  Json p = Json::array();
  for (double x : r.parameters) p.push_back(number(x));
  j["parameters"] = p;
  j["evaluations"] = r.evaluations;
  j["budget_exhausted"] = r.budget_exhausted;
  j["violation"] = r.violation;
  return j;
}

ProbeResult probe_from_json(const Json& j) {
  ProbeResult r;
  r.alpha = number_from(j.at("alpha"));
  r.best_value = number_from(j.at("best_value"));
  r.bound = number_from(j.at("bound"));
  r.gap = number_from(j.at("gap"));
  r.best_restart = j.at("best_restart").get<std::size_t>();
  for (const auto& x : j.at("parameters")) r.parameters.push_back(number_from(x));
  r.evaluations = j.at("evaluations").get<std::size_t>();
  r.budget_exhausted = j.at("budget_exhausted").get<bool>();
  r.violation = j.at("violation").get<bool>();
  return r;
}

#define RENYI_REACH_ESTIMATION_NUMBERS(X)                                                     \
  X(theta_true) X(theta_0) X(mean_theta) X(mean_theta0) X(var_theta) X(mse_theta) X(bias_sq) \
  X(mean_shift_sq) X(lhs_var) X(lhs_mse) X(se_var) X(se_mse) X(rhs) X(exact_lhs_var)         \
  X(exact_lhs_mse) X(d2) X(chain_lhs) X(chain_rhs) X(mse_identity_residual) X(boundary_fraction)

#define RENYI_REACH_ESTIMATION_FLAGS(X) X(chain_ok) X(grid_too_coarse) X(vacuous) X(violation)

Json to_json(const EstimationReport& r) {
  Json j;
  j["repetitions"] = r.repetitions;
  j["shots"] = r.shots;
#define X(name) j[#name] = number(r.name);
  RENYI_REACH_ESTIMATION_NUMBERS(X)
#undef X
#define X(name) j[#name] = r.name;
  RENYI_REACH_ESTIMATION_FLAGS(X)
#undef X
  return j;
}

EstimationReport estimation_from_json(const Json& j) {
  EstimationReport r;
  r.repetitions = j.at("repetitions").get<int>();
  r.shots = j.at("shots").get<std::size_t>();
#define X(name) r.name = number_from(j.at(#name));
  RENYI_REACH_ESTIMATION_NUMBERS(X)
#undef X
#define X(name) r.name = j.at(#name).get<bool>();
  RENYI_REACH_ESTIMATION_FLAGS(X)
#undef X
  return r;
}

std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

Table campaign_table(const CampaignReport& r) {
  Table t{{"trial", "quantity", "alpha", "measured", "bound", "margin", "violation", "skipped"}, {}};
  for (const auto& row : r.rows) {
    t.rows.push_back({std::to_string(row.trial), std::string(to_string(row.quantity)), cell(row.alpha),
                      cell(row.measured), cell(row.bound), cell(row.margin), cell(row.violation),
                      cell(row.skipped)});
  }
  return t;
}

}  // namespace renyi_reach::io
