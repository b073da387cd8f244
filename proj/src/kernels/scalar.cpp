#include "renyi_reach/kernels.hpp"

namespace renyi_reach::kernels::scalar {

void cgemm_nn(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b,
              cdouble* c) {
  for (std::size_t i = 0; i < m; ++i) {
    cdouble* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      const cdouble* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[j].real();
        const double bi = brow[j].imag();
        crow[j] += cdouble(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  }
}

void cgemm_nc(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b,
              cdouble* c) {
  for (std::size_t i = 0; i < m; ++i) {
    const cdouble* arow = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const cdouble* brow = b + j * k;
      double re = 0.0;
      double im = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        const double ar = arow[p].real();
        const double ai = arow[p].imag();
        const double br = brow[p].real();
        const double bi = brow[p].imag();
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
      }
      c[i * n + j] = cdouble(re, im);
    }
  }
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

std::size_t argmax(std::size_t n, const double* x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] > x[best]) best = i;
  }
  return best;
}

}  // namespace renyi_reach::kernels::scalar
