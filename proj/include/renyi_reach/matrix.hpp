#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace renyi_reach {

using cdouble = std::complex<double>;

/// Dense row-major complex matrix. Products go through the dispatched kernels.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Throws DimensionMismatch on size mismatch and NonFinite on NaN/Inf entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::span<const cdouble> values);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

  cdouble& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  [[nodiscard]] std::span<const cdouble> entries() const noexcept { return entries_; }
  [[nodiscard]] cdouble* data() noexcept { return entries_.data(); }
  [[nodiscard]] const cdouble* data() const noexcept { return entries_.data(); }

  [[nodiscard]] ComplexMatrix adjoint() const;
  [[nodiscard]] ComplexMatrix transpose() const;
  [[nodiscard]] cdouble trace() const;
  [[nodiscard]] std::vector<double> real_diagonal() const;
  /// max_ij |a_ij|
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cdouble scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cdouble scale);
ComplexMatrix operator*(cdouble scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// a * b^dagger without forming the adjoint.
ComplexMatrix multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b);

/// a * b * a^dagger
ComplexMatrix conjugate_by(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |a_ij - b_ij|; throws DimensionMismatch on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Re Tr[a b] for square matrices of equal size.
double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// (M + M^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

}  // namespace renyi_reach
