#pragma once

#include <cmath>

#include "sgbc/common.hpp"
#include "sgbc/simd.hpp"

// Krylov-level vector updates routed through the SIMD kernel table.

namespace sgbc::vec {

inline double dot(const Vector& x, const Vector& y) {
  return simd::kernels().dot(x.data(), y.data(), static_cast<std::size_t>(x.size()));
}

inline double norm(const Vector& x) { return std::sqrt(dot(x, x)); }

/// y += a*x
inline void axpy(double a, const Vector& x, Vector& y) {
  simd::kernels().axpy(a, x.data(), y.data(), static_cast<std::size_t>(x.size()));
}

/// y = a*x + b*y
inline void axpby(double a, const Vector& x, double b, Vector& y) {
  simd::kernels().axpby(a, x.data(), b, y.data(), static_cast<std::size_t>(x.size()));
}

}  // namespace sgbc::vec
