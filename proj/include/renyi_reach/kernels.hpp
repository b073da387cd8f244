#pragma once

// Inner arithmetic loops with a portable scalar reference and SIMD variants.
// The active table is chosen once at startup from CPU features; the
// RENYI_REACH_KERNELS environment variable ("scalar" or "avx2") overrides it.

#include <complex>
#include <cstddef>
#include <string_view>

namespace renyi_reach::kernels {

using cdouble = std::complex<double>;

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend backend);

/// Row-major complex product c = a * b with a (m x k), b (k x n), c (m x n).
using CgemmNN = void (*)(std::size_t m, std::size_t n, std::size_t k, const cdouble* a,
                         const cdouble* b, cdouble* c);
/// Row-major complex product c = a * b^dagger with a (m x k), b (n x k).
using CgemmNC = void (*)(std::size_t m, std::size_t n, std::size_t k, const cdouble* a,
                         const cdouble* b, cdouble* c);
/// y += alpha * x.
using Axpy = void (*)(std::size_t n, double alpha, const double* x, double* y);
/// Index of the first maximum of x (n > 0).
using Argmax = std::size_t (*)(std::size_t n, const double* x);

struct KernelTable {
  Backend backend;
  CgemmNN cgemm_nn;
  CgemmNC cgemm_nc;
  Axpy axpy;
  Argmax argmax;
};

namespace scalar {
void cgemm_nn(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b,
              cdouble* c);
void cgemm_nc(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b,
              cdouble* c);
void axpy(std::size_t n, double alpha, const double* x, double* y);
std::size_t argmax(std::size_t n, const double* x);
}  // namespace scalar

#if defined(RENYI_REACH_HAVE_AVX2)
namespace avx2 {
void cgemm_nn(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b,
              cdouble* c);
void cgemm_nc(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b,
              cdouble* c);
void axpy(std::size_t n, double alpha, const double* x, double* y);
std::size_t argmax(std::size_t n, const double* x);
}  // namespace avx2
#endif

/// True when the AVX2 variants were compiled in and the CPU supports AVX2+FMA.
bool avx2_available();

/// Table for a specific backend; throws std::invalid_argument if unavailable.
const KernelTable& table(Backend backend);

/// Table currently used by the library.
const KernelTable& active();

/// Switch the active backend (tests and benchmarks).
void select(Backend backend);

}  // namespace renyi_reach::kernels
