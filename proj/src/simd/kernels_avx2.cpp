// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check.
#include "lcw/simd.hpp"

#include <immintrin.h>

namespace lcw::simd::avx2 {

void axpby(double a, const double *x, double b, const double *y, double *out,
           std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, vx, _mm256_mul_pd(vb, vy)));
  }
  for (; i < n; ++i)
    out[i] = a * x[i] + b * y[i];
}

void scale(double a, const double *x, double *out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i)
    out[i] = a * x[i];
}

double dot(const double *x, const double *y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i)
    s += x[i] * y[i];
  return s;
}

void gemv_t(const double *A, std::size_t rows, std::size_t cols, const double *x,
            double *y) {
  std::size_t c = 0;
  for (; c + 4 <= cols; c += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(x[r]), _mm256_loadu_pd(A + r * cols + c), acc);
    _mm256_storeu_pd(y + c, acc);
  }
  for (; c < cols; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
      s += x[r] * A[r * cols + c];
    y[c] = s;
  }
}

} // namespace lcw::simd::avx2
