#include "sgbc/simd.hpp"

#include <algorithm>

namespace sgbc::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double total = 0.0;
  for (std::size_t b = 0; b < n; b += kDotBlock) {
    const std::size_t e = std::min(n, b + kDotBlock);
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += x[i] * y[i];
    total += s;
  }
  return total;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_scalar(double a, const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void csr_terms_row_scalar(const int* cols, const double* vals, std::size_t nnz,
                          std::size_t nterms, const double* x, std::size_t width,
                          double* acc) {
  for (std::size_t e = 0; e < nnz; ++e) {
    const double* xr = x + static_cast<std::size_t>(cols[e]) * width;
    const double* v = vals + e * nterms;
    for (std::size_t t = 0; t < nterms; ++t) {
      const double a = v[t];
      double* out = acc + t * width;
      for (std::size_t c = 0; c < width; ++c) out[c] += a * xr[c];
    }
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, dot_scalar, axpy_scalar, axpby_scalar,
                                 csr_terms_row_scalar};
  return table;
}

}  // namespace sgbc::simd
