// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <limits>

#include "renyi_reach/kernels.hpp"

namespace renyi_reach::kernels::avx2 {

namespace {

inline const double* as_doubles(const cdouble* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cdouble* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void cgemm_nn(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b,
              cdouble* c) {
  // Two complex numbers per register: [re0, im0, re1, im1].
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = as_doubles(c + i * n);
    for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      const __m256d vr = _mm256_set1_pd(ar);
      const __m256d vi = _mm256_set1_pd(ai);
      const double* brow = as_doubles(b + p * n);
      for (std::size_t q = 0; q < pairs; ++q) {
        const __m256d bv = _mm256_loadu_pd(brow + 4 * q);
        const __m256d bswap = _mm256_permute_pd(bv, 0b0101);
        // even lanes: ar*br - ai*bi, odd lanes: ar*bi + ai*br
        const __m256d prod = _mm256_fmaddsub_pd(vr, bv, _mm256_mul_pd(vi, bswap));
        _mm256_storeu_pd(crow + 4 * q, _mm256_add_pd(_mm256_loadu_pd(crow + 4 * q), prod));
      }
      if (n % 2 != 0) {
        const std::size_t j = n - 1;
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void cgemm_nc(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b,
              cdouble* c) {
  const std::size_t pairs = k / 2;
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = as_doubles(a + i * k);
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = as_doubles(b + j * k);
      __m256d acc_re = _mm256_setzero_pd();
      __m256d acc_im = _mm256_setzero_pd();
      for (std::size_t q = 0; q < pairs; ++q) {
        const __m256d av = _mm256_loadu_pd(arow + 4 * q);
        const __m256d bv = _mm256_loadu_pd(brow + 4 * q);
        // [ar*br, ai*bi, ...] sums to the real part.
        acc_re = _mm256_fmadd_pd(av, bv, acc_re);
        // [ai*br, ar*bi, ...]: even minus odd lanes gives the imaginary part.
        acc_im = _mm256_fmadd_pd(_mm256_permute_pd(av, 0b0101), bv, acc_im);
      }
      double re = hsum(acc_re);
      alignas(32) double im_lanes[4];
      _mm256_store_pd(im_lanes, acc_im);
      double im = (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]);
      if (k % 2 != 0) {
        const std::size_t p = k - 1;
        const double ar = arow[2 * p];
        const double ai = arow[2 * p + 1];
        const double br = brow[2 * p];
        const double bi = brow[2 * p + 1];
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
      }
      c[i * n + j] = cdouble(re, im);
    }
  }
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

std::size_t argmax(std::size_t n, const double* x) {
  __m256d vmax = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double best = lanes[0];
  for (int l = 1; l < 4; ++l) best = lanes[l] > best ? lanes[l] : best;
  for (; i < n; ++i) best = x[i] > best ? x[i] : best;

  // First index attaining the maximum, matching the scalar tie rule.
  const __m256d vbest = _mm256_set1_pd(best);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + j), vbest, _CMP_EQ_OQ));
    if (mask != 0) return j + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; j < n; ++j) {
    if (x[j] == best) return j;
  }
  return 0;
}

}  // namespace renyi_reach::kernels::avx2
