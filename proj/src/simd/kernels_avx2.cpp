// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "sgbc/simd.hpp"

#include <immintrin.h>

#include <algorithm>

namespace sgbc::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  double total = 0.0;
  for (std::size_t b = 0; b < n; b += kDotBlock) {
    const std::size_t e = std::min(n, b + kDotBlock);
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t i = b;
    for (; i + 8 <= e; i += 8) {
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
      s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
    }
    for (; i + 4 <= e; i += 4)
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; i < e; ++i) s += x[i] * y[i];
    total += s;
  }
  return total;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_avx2(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), t));
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void csr_terms_row_avx2(const int* cols, const double* vals, std::size_t nnz,
                        std::size_t nterms, const double* x, std::size_t width,
                        double* acc) {
  const std::size_t vec_end = width - width % 4;
  for (std::size_t e = 0; e < nnz; ++e) {
    const double* xr = x + static_cast<std::size_t>(cols[e]) * width;
    const double* v = vals + e * nterms;
    for (std::size_t t = 0; t < nterms; ++t) {
      const double a = v[t];
      double* out = acc + t * width;
      const __m256d va = _mm256_set1_pd(a);
      std::size_t c = 0;
      for (; c < vec_end; c += 4)
        _mm256_storeu_pd(out + c,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(xr + c), _mm256_loadu_pd(out + c)));
      for (; c < width; ++c) out[c] += a * xr[c];
    }
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Isa::avx2, dot_avx2, axpy_avx2, axpby_avx2, csr_terms_row_avx2};
  return &table;
}

}  // namespace sgbc::simd
