#include "renyi_reach/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "renyi_reach/error.hpp"

namespace renyi_reach {

namespace {

// Eigenvalues at or below this are outside the support for negative powers.
constexpr double kSupportThreshold = 1e-12;
constexpr int kMaxJacobiSweeps = 64;

double hermiticity_residual(const ComplexMatrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  }
  return r;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square() || m.empty()) {
    throw Error(ErrorCode::NotSquare, std::string(what) + " requires a non-empty square matrix");
  }
}

double off_diagonal_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return s;
}

// One complex Jacobi rotation zeroing a(p, q); accumulates into v.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const cdouble apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cdouble phase_conj = std::conj(apq / mag);  // e^{-i phi}

  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const cdouble jpp = c;
  const cdouble jpq = s;
  const cdouble jqp = -s * phase_conj;
  const cdouble jqq = c * phase_conj;

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const cdouble akp = a(k, p);
    const cdouble akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cdouble apk = a(p, k);
    const cdouble aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const cdouble vkp = v(k, p);
    const cdouble vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// validated types

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities, const Tolerances& tol) {
  return validate_density(ComplexMatrix::diagonal(probabilities), tol);
}

UnitaryMatrix UnitaryMatrix::from_matrix(ComplexMatrix m, const Tolerances& tol) {
  require_square(m, "unitary");
  const double residual =
      max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows()));
  if (residual > tol.unitarity) {
    throw Error(ErrorCode::NotUnitary, "max |U^dagger U - I| exceeds tolerance", residual);
  }
  return UnitaryMatrix(std::move(m));
}

Spectrum Spectrum::from_values(std::vector<double> values, SpectrumOrder order,
                               const Tolerances& tol) {
  if (values.empty()) throw Error(ErrorCode::InvalidSpectrum, "empty spectrum");
  double sum = 0.0;
  for (double& x : values) {
    if (!std::isfinite(x) || x < -tol.psd || x > 1.0 + tol.trace) {
      throw Error(ErrorCode::InvalidSpectrum, "entry outside [0, 1]", x);
    }
    x = std::clamp(x, 0.0, 1.0);
    sum += x;
  }
  const double slack = static_cast<double>(values.size()) * tol.trace;
  if (std::abs(sum - 1.0) > slack) {
    throw Error(ErrorCode::InvalidSpectrum, "spectrum sum != 1", sum - 1.0);
  }
  if (order == SpectrumOrder::Descending && !std::is_sorted(values.begin(), values.end(), std::greater<>())) {
    throw Error(ErrorCode::InvalidSpectrum, "values tagged descending are not sorted");
  }
  if (order == SpectrumOrder::Ascending && !std::is_sorted(values.begin(), values.end())) {
    throw Error(ErrorCode::InvalidSpectrum, "values tagged ascending are not sorted");
  }
  return Spectrum(std::move(values), order);
}

std::vector<double> Spectrum::descending() const {
  std::vector<double> v = values_;
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return v;
}

std::vector<double> Spectrum::ascending() const {
  std::vector<double> v = values_;
  std::stable_sort(v.begin(), v.end());
  return v;
}

Povm Povm::create(std::vector<double> outcomes, std::vector<ComplexMatrix> elements,
                  const Tolerances& tol) {
  if (elements.empty() || outcomes.size() != elements.size()) {
    throw Error(ErrorCode::InvalidPovm, "need one outcome label per element");
  }
  {
    std::vector<double> sorted = outcomes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::InvalidPovm, "outcome labels must be distinct");
    }
  }
  const std::size_t d = elements.front().rows();
  ComplexMatrix total(d, d);
  for (auto& e : elements) {
    require_square(e, "POVM element");
    if (e.rows() != d) throw Error(ErrorCode::DimensionMismatch, "POVM elements differ in dimension");
    const double herm = hermiticity_residual(e);
    if (herm > tol.hermiticity) throw Error(ErrorCode::InvalidPovm, "element not Hermitian", herm);
    e = hermitian_part(e);
    const auto eig = hermitian_eig(e, tol);
    if (eig.values.back() < -tol.psd) {
      throw Error(ErrorCode::InvalidPovm, "element not positive semidefinite", eig.values.back());
    }
    total += e;
  }
  const double completeness = max_abs_diff(total, ComplexMatrix::identity(d));
  if (completeness > tol.trace) {
    throw Error(ErrorCode::InvalidPovm, "elements do not sum to identity", completeness);
  }
  return Povm(std::move(outcomes), std::move(elements));
}

Povm Povm::computational_basis(std::size_t dim) {
  std::vector<double> outcomes(dim);
  std::vector<ComplexMatrix> elements;
  for (std::size_t i = 0; i < dim; ++i) {
    outcomes[i] = static_cast<double>(i);
    ComplexMatrix e(dim, dim);
    e(i, i) = 1.0;
    elements.push_back(std::move(e));
  }
  return Povm(std::move(outcomes), std::move(elements));
}

// ---------------------------------------------------------------------------
// operations

DensityMatrix validate_density(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "density matrix");
  if (!m.all_finite()) throw Error(ErrorCode::NonFinite, "density matrix has non-finite entries");
  const double herm = hermiticity_residual(m);
  if (herm > tol.hermiticity) throw Error(ErrorCode::NotHermitian, "max |M - M^dagger|", herm);
  ComplexMatrix h = hermitian_part(m);
  const double trace_residual = h.trace().real() - 1.0;
  if (std::abs(trace_residual) > tol.trace) {
    throw Error(ErrorCode::TraceNotOne, "trace deviates from 1", trace_residual);
  }
  const auto eig = hermitian_eig(h, tol);
  if (eig.values.back() < -tol.psd) {
    throw Error(ErrorCode::NotPositive, "negative eigenvalue", eig.values.back());
  }
  return DensityMatrix(std::move(h));
}

HermitianEigen hermitian_eig(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "hermitian_eig");
  const double scale = std::max(1.0, m.max_abs());
  const double herm = hermiticity_residual(m);
  if (herm > tol.hermiticity * scale) {
    throw Error(ErrorCode::NotHermitian, "max |M - M^dagger|", herm);
  }
  const std::size_t n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);

  double frob2 = 0.0;
  for (const auto& z : a.entries()) frob2 += std::norm(z);
  const double target = frob2 * 1e-32;

  int sweep = 0;
  while (off_diagonal_norm2(a) > target) {
    if (++sweep > kMaxJacobiSweeps) {
      throw Error(ErrorCode::ConvergenceFailure, "Jacobi sweep limit reached",
                  std::sqrt(off_diagonal_norm2(a)));
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

Spectrum spectrum_of(const DensityMatrix& rho, const Tolerances& tol) {
  auto eig = hermitian_eig(rho.matrix(), tol);
  return Spectrum::from_values(std::move(eig.values), SpectrumOrder::Descending, tol);
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t is = 0; is < a.rows(); ++is) {
    for (std::size_t js = 0; js < a.cols(); ++js) {
      const cdouble x = a(is, js);
      if (x == cdouble(0.0)) continue;
      for (std::size_t ie = 0; ie < b.rows(); ++ie) {
        for (std::size_t je = 0; je < b.cols(); ++je) {
          out(is * b.rows() + ie, js * b.cols() + je) = x * b(ie, je);
        }
      }
    }
  }
  return out;
}

ComplexMatrix partial_trace_env(const ComplexMatrix& m, std::size_t d_s, std::size_t d_e) {
  if (!m.is_square() || m.rows() != d_s * d_e || d_s == 0 || d_e == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "partial trace expects " + std::to_string(d_s * d_e) + "x" +
                    std::to_string(d_s * d_e) + ", got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
  ComplexMatrix out(d_s, d_s);
  for (std::size_t i = 0; i < d_s; ++i) {
    for (std::size_t j = 0; j < d_s; ++j) {
      cdouble s = 0.0;
      for (std::size_t k = 0; k < d_e; ++k) s += m(i * d_e + k, j * d_e + k);
      out(i, j) = s;
    }
  }
  return out;
}

ComplexMatrix spectral_reconstruct(const ComplexMatrix& vectors, std::span<const cdouble> weights) {
  ComplexMatrix scaled = vectors;
  for (std::size_t r = 0; r < scaled.rows(); ++r) {
    for (std::size_t c = 0; c < scaled.cols(); ++c) scaled(r, c) *= weights[c];
  }
  return multiply_adjoint(scaled, vectors);
}

ComplexMatrix spectral_power(const HermitianEigen& eig, double p) {
  std::vector<cdouble> w(eig.values.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double lambda = std::max(eig.values[i], 0.0);
    if (p > 0.0) {
      w[i] = lambda == 0.0 ? 0.0 : std::pow(lambda, p);
    } else {
      w[i] = lambda <= kSupportThreshold ? 0.0 : std::pow(lambda, p);
    }
  }
  return spectral_reconstruct(eig.vectors, w);
}

ComplexMatrix matrix_power_psd(const ComplexMatrix& m, double p, const Tolerances& tol) {
  const auto eig = hermitian_eig(m, tol);
  if (eig.values.back() < -tol.psd) {
    throw Error(ErrorCode::NotPositive, "negative eigenvalue in matrix power", eig.values.back());
  }
  return spectral_power(eig, p);
}

UnitaryMatrix unitary_exp(const ComplexMatrix& h, double t, const Tolerances& tol) {
  const auto eig = hermitian_eig(h, tol);
  std::vector<cdouble> w(eig.values.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::polar(1.0, -t * eig.values[i]);
  return UnitaryMatrix::from_matrix(spectral_reconstruct(eig.vectors, w), tol);
}

UnitaryMatrix haar_unitary(std::size_t dim, Rng& rng) {
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "haar_unitary needs dim >= 1");
  ComplexMatrix q = ginibre(dim, dim, rng);
  // Gram-Schmidt with a second orthogonalization pass. R's diagonal comes out
  // real positive, so the phase correction that makes QR Haar is the identity.
  for (std::size_t j = 0; j < dim; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        cdouble r = 0.0;
        for (std::size_t k = 0; k < dim; ++k) r += std::conj(q(k, i)) * q(k, j);
        for (std::size_t k = 0; k < dim; ++k) q(k, j) -= r * q(k, i);
      }
    }
    double norm2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) norm2 += std::norm(q(k, j));
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t k = 0; k < dim; ++k) q(k, j) *= inv;
  }
  return UnitaryMatrix::from_matrix(std::move(q), Tolerances{.unitarity = 1e-12});
}

UnitaryMatrix haar_unitary(std::size_t dim, RngSeed seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

DensityMatrix random_density_hs(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  ComplexMatrix w = multiply_adjoint(g, g);
  w *= 1.0 / w.trace().real();
  return validate_density(w);
}

DensityMatrix random_density_fixed(const Spectrum& spectrum, Rng& rng) {
  const UnitaryMatrix v = haar_unitary(spectrum.size(), rng);
  std::vector<cdouble> w(spectrum.values().begin(), spectrum.values().end());
  return validate_density(spectral_reconstruct(v.matrix(), w));
}

Povm random_povm(std::size_t dim, std::size_t outcomes, Rng& rng) {
  if (outcomes < 2) throw Error(ErrorCode::InvalidPovm, "random_povm needs at least 2 outcomes");
  std::vector<ComplexMatrix> parts;
  ComplexMatrix total(dim, dim);
  for (std::size_t j = 0; j < outcomes; ++j) {
    const ComplexMatrix g = ginibre(dim, dim, rng);
    parts.push_back(multiply_adjoint(g, g));
    total += parts.back();
  }
  const auto eig = hermitian_eig(total);
  if (eig.values.back() <= kSupportThreshold * std::max(1.0, eig.values.front())) {
    throw Error(ErrorCode::SingularNormalizer, "sum of POVM seeds is singular", eig.values.back());
  }
  const ComplexMatrix inv_sqrt = spectral_power(eig, -0.5);
  std::vector<double> labels(outcomes);
  std::vector<ComplexMatrix> elements;
  for (std::size_t j = 0; j < outcomes; ++j) {
    labels[j] = static_cast<double>(j);
    elements.push_back(hermitian_part(inv_sqrt * parts[j] * inv_sqrt));
  }
  return Povm::create(std::move(labels), std::move(elements));
}

ComplexMatrix swap_operator(std::size_t dim) {
  ComplexMatrix s(dim * dim, dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) s(j * dim + i, i * dim + j) = 1.0;
  }
  return s;
}

}  // namespace renyi_reach
