#include "renyi_reach/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "renyi_reach/error.hpp"
#include "renyi_reach/kernels.hpp"

namespace renyi_reach {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, cdouble(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "entry count " + std::to_string(entries_.size()) + " does not match " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  if (!all_finite()) throw Error(ErrorCode::NonFinite, "matrix has NaN or infinite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cdouble> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

cdouble ComplexMatrix::trace() const {
  cdouble t = 0.0;
  const std::size_t n = rows_ < cols_ ? rows_ : cols_;
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

std::vector<double> ComplexMatrix::real_diagonal() const {
  const std::size_t n = rows_ < cols_ ? rows_ : cols_;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i).real();
  return d;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const auto& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix addition");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix subtraction");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cdouble scale) { return a *= scale; }
ComplexMatrix operator*(cdouble scale, ComplexMatrix a) { return a *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  ComplexMatrix c(a.rows(), b.cols());
  kernels::active().cgemm_nn(a.rows(), b.cols(), a.cols(), a.data(), b.data(), c.data());
  return c;
}

ComplexMatrix multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "a * b^dagger needs equal column counts");
  }
  ComplexMatrix c(a.rows(), b.rows());
  kernels::active().cgemm_nc(a.rows(), b.rows(), a.cols(), a.data(), b.data(), c.data());
  return c;
}

ComplexMatrix conjugate_by(const ComplexMatrix& a, const ComplexMatrix& b) {
  return multiply_adjoint(a * b, a);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || a.rows() != b.cols() || a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "trace of product needs conforming square matrices");
  }
  const std::size_t n = a.rows();
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) t += (a(i, k) * b(k, i)).real();
  }
  return t;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "hermitian part of a non-square matrix");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  }
  return out;
}

}  // namespace renyi_reach
