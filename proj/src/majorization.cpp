#include "renyi_reach/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "renyi_reach/divergences.hpp"
#include "renyi_reach/error.hpp"
#include "renyi_reach/linalg.hpp"

namespace renyi_reach {

namespace {

constexpr double kSlack = 1e-10;

}  // namespace

ProbVector ProbVector::create(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidSpectrum, "empty probability vector");
  double sum = 0.0;
  for (double& v : values) {
    if (!std::isfinite(v) || v < -kSlack) throw Error(ErrorCode::InvalidSpectrum, "negative entry", v);
    v = std::max(v, 0.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSlack) {
    throw Error(ErrorCode::InvalidSpectrum, "probability vector sum != 1", sum - 1.0);
  }
  return ProbVector(std::move(values));
}

std::vector<double> ProbVector::descending() const {
  std::vector<double> v = values_;
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return v;
}

std::vector<double> ProbVector::ascending() const {
  std::vector<double> v = values_;
  std::stable_sort(v.begin(), v.end());
  return v;
}

bool majorizes(const ProbVector& x, const ProbVector& y) {
  std::vector<double> xs = x.descending();
  std::vector<double> ys = y.descending();
  const std::size_t n = std::max(xs.size(), ys.size());
  xs.resize(n, 0.0);
  ys.resize(n, 0.0);
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sx += xs[k];
    sy += ys[k];
    if (sx < sy - kSlack) return false;
  }
  return std::abs(sx - sy) <= kSlack;
}

double pairing_function(const ProbVector& a, const ProbVector& x, double alpha) {
  require_renyi_alpha(alpha);
  if (a.size() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "pairing function needs equal lengths");
  }
  const auto up = a.ascending();
  const auto down = x.descending();
  double s = 0.0;
  for (std::size_t n = 0; n < up.size(); ++n) {
    if (up[n] == 0.0) continue;
    if (down[n] == 0.0) {
      if (alpha > 1.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    s += std::pow(up[n], alpha) * std::pow(down[n], 1.0 - alpha);
  }
  return s;
}

bool schur_direction_check(const ProbVector& a, const ProbVector& x, const ProbVector& y,
                           double alpha) {
  if (!majorizes(x, y)) {
    throw Error(ErrorCode::PreconditionViolated, "x does not majorize y");
  }
  const double lhs = renyi_log(pairing_function(a, x, alpha), alpha);
  const double rhs = renyi_log(pairing_function(a, y, alpha), alpha);
  if (lhs == std::numeric_limits<double>::infinity()) return true;
  if (rhs == std::numeric_limits<double>::infinity()) return false;
  return lhs >= rhs - kSlack;
}

VonNeumannSandwich von_neumann_check(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || a.rows() != b.rows() || !b.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "von Neumann check needs equal square matrices");
  }
  const auto ea = hermitian_eig(a);
  const auto eb = hermitian_eig(b);
  const std::size_t n = ea.values.size();
  VonNeumannSandwich out{0.0, real_trace_product(a, b), 0.0};
  // values are descending: index n-1-k is the k-th smallest.
  for (std::size_t k = 0; k < n; ++k) {
    const double a_up = ea.values[n - 1 - k];
    out.lower += a_up * eb.values[k];
    out.upper += a_up * eb.values[n - 1 - k];
  }
  return out;
}

bool schur_horn_check(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  std::vector<double> diag = m.real_diagonal();
  std::vector<double> vals = eig.values;
  const double lowest = std::min(vals.back(), *std::min_element(diag.begin(), diag.end()));
  const double shift = lowest < 0.0 ? -lowest : 0.0;
  double total = 0.0;
  for (double& v : vals) {
    v += shift;
    total += v;
  }
  if (total <= 0.0) return true;  // M = 0 after shifting: both vectors vanish
  double diag_total = 0.0;
  for (double& v : diag) {
    v += shift;
    diag_total += v;
  }
  for (double& v : vals) v /= total;
  for (double& v : diag) v /= diag_total;
  return majorizes(ProbVector::create(std::move(vals)), ProbVector::create(std::move(diag)));
}

}  // namespace renyi_reach
