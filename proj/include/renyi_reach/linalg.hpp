#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "renyi_reach/matrix.hpp"
#include "renyi_reach/rng.hpp"

namespace renyi_reach {

/// Acceptance thresholds for the validated matrix types.
struct Tolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double psd = 1e-10;
  double unitarity = 1e-10;
};

/// Hermitian, PSD, unit-trace matrix.
class DensityMatrix {
 public:
  [[nodiscard]] std::size_t dim() const noexcept { return matrix_.rows(); }
  [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return matrix_; }

  /// Diagonal state diag(p); validated.
  static DensityMatrix diagonal(std::span<const double> probabilities, const Tolerances& tol = {});

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  friend DensityMatrix validate_density(const ComplexMatrix&, const Tolerances&);
  ComplexMatrix matrix_;
};

class UnitaryMatrix {
 public:
  /// Throws NotSquare or NotUnitary (residual = max |U^dagger U - I|).
  static UnitaryMatrix from_matrix(ComplexMatrix m, const Tolerances& tol = {});
  static UnitaryMatrix identity(std::size_t dim) { return UnitaryMatrix(ComplexMatrix::identity(dim)); }

  [[nodiscard]] std::size_t dim() const noexcept { return matrix_.rows(); }
  [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return matrix_; }

 private:
  explicit UnitaryMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

enum class SpectrumOrder { Ascending, Descending, Unsorted };

/// Probability vector of eigenvalues. Entries are clipped to [0, 1] on
/// construction; sorted views are stable (ties keep original order).
class Spectrum {
 public:
  /// Throws InvalidSpectrum if an entry leaves [-psd, 1 + trace] or the sum
  /// deviates from 1 by more than size * trace tolerance.
  static Spectrum from_values(std::vector<double> values,
                              SpectrumOrder order = SpectrumOrder::Unsorted,
                              const Tolerances& tol = {});

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] SpectrumOrder order() const noexcept { return order_; }
  [[nodiscard]] std::vector<double> descending() const;
  [[nodiscard]] std::vector<double> ascending() const;

 private:
  Spectrum(std::vector<double> v, SpectrumOrder o) : values_(std::move(v)), order_(o) {}
  std::vector<double> values_;
  SpectrumOrder order_;
};

/// Positive operators labelled by distinct real outcomes, summing to identity.
class Povm {
 public:
  static Povm create(std::vector<double> outcomes, std::vector<ComplexMatrix> elements,
                     const Tolerances& tol = {});
  /// Projective measurement in the computational basis, outcomes 0..d-1.
  static Povm computational_basis(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return elements_.front().rows(); }
  [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
  [[nodiscard]] const std::vector<double>& outcomes() const noexcept { return outcomes_; }
  [[nodiscard]] const std::vector<ComplexMatrix>& elements() const noexcept { return elements_; }

 private:
  Povm(std::vector<double> o, std::vector<ComplexMatrix> e)
      : outcomes_(std::move(o)), elements_(std::move(e)) {}
  std::vector<double> outcomes_;
  std::vector<ComplexMatrix> elements_;
};

/// Eigenvalues in descending order (ties: ascending original index) and the
/// matching eigenvectors as columns.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

/// Symmetrizes M then checks hermiticity, trace and positivity.
/// Errors: NotSquare, NotHermitian, TraceNotOne, NotPositive.
DensityMatrix validate_density(const ComplexMatrix& m, const Tolerances& tol = {});

/// Cyclic complex Jacobi. Errors: NotSquare, NotHermitian, ConvergenceFailure.
HermitianEigen hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {});

/// Eigenvalues of a density matrix as a Spectrum (descending).
Spectrum spectrum_of(const DensityMatrix& rho, const Tolerances& tol = {});

/// Kronecker product with system-major index i = i_S * d_E + i_E.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// out[i, j] = sum_k M[i*d_E + k, j*d_E + k]. Errors: DimensionMismatch.
ComplexMatrix partial_trace_env(const ComplexMatrix& m, std::size_t d_s, std::size_t d_e);

/// M^p through the spectral decomposition. Eigenvalues in [-1e-10, 0) are
/// clipped to 0; more negative ones raise NotPositive. Zero eigenvalues map to
/// 0 for every p (support convention), including p <= 0.
ComplexMatrix matrix_power_psd(const ComplexMatrix& m, double p, const Tolerances& tol = {});

/// Same as matrix_power_psd on an existing decomposition.
ComplexMatrix spectral_power(const HermitianEigen& eig, double p);

/// V f(diag) V^dagger for a decomposition and per-eigenvalue weights.
ComplexMatrix spectral_reconstruct(const ComplexMatrix& vectors, std::span<const cdouble> weights);

/// exp(-i t H) for Hermitian H.
UnitaryMatrix unitary_exp(const ComplexMatrix& h, double t, const Tolerances& tol = {});

/// Haar-distributed d x d unitary from QR of a Ginibre matrix with the
/// triangular-diagonal phase correction.
UnitaryMatrix haar_unitary(std::size_t dim, Rng& rng);
UnitaryMatrix haar_unitary(std::size_t dim, RngSeed seed);

enum class DensityEnsemble { HilbertSchmidt, FixedSpectrum };

/// Hilbert-Schmidt: G G^dagger / Tr(G G^dagger).
DensityMatrix random_density_hs(std::size_t dim, Rng& rng);
/// V diag(spectrum) V^dagger with V Haar. Errors: InvalidSpectrum.
DensityMatrix random_density_fixed(const Spectrum& spectrum, Rng& rng);

/// M_j = S^{-1/2} A_j S^{-1/2} with A_j = G_j G_j^dagger, S = sum A_j.
/// Errors: InvalidPovm (k < 2), SingularNormalizer.
Povm random_povm(std::size_t dim, std::size_t outcomes, Rng& rng);

/// SWAP on C^d (x) C^d.
ComplexMatrix swap_operator(std::size_t dim);

}  // namespace renyi_reach
