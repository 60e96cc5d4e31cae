#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the Kronecker operators, the multi-RHS
// triangular solves and the Krylov vector updates. Every kernel has a scalar
// reference version and an AVX2/FMA version; the table is chosen once at
// startup from the CPU flags (override with SGBC_SIMD=scalar|avx2).

namespace sgbc::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;

  /// Sum of x[i]*y[i]. Partial sums are formed per block of
  /// kDotBlock entries and combined in block order, so the result does not
  /// depend on how callers split the range.
  double (*dot)(const double* x, const double* y, std::size_t n);

  /// y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  /// y = a*x + b*y
  void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);

  /// Row kernel of a multi-term CSR product against a node-major block:
  ///   acc[t*width + c] += sum_e vals[e*nterms + t] * x[cols[e]*width + c]
  /// for t < nterms, c < width, e < nnz.
  void (*csr_terms_row)(const int* cols, const double* vals, std::size_t nnz,
                        std::size_t nterms, const double* x, std::size_t width,
                        double* acc);
};

inline constexpr std::size_t kDotBlock = 256;

const KernelTable& scalar_kernels();
/// Returns nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();

/// Active table; resolved on first use.
const KernelTable& kernels();

/// Force a table (tests and benchmarking). Returns false if unavailable.
bool select(Isa isa);

bool cpu_has_avx2();
std::string_view name(Isa isa);

}  // namespace sgbc::simd
