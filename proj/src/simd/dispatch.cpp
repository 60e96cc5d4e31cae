#include <atomic>
#include <cstdlib>
#include <string>

#include "sgbc/simd.hpp"

namespace sgbc::simd {

#ifndef SGBC_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* resolve() {
  const char* env = std::getenv("SGBC_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &scalar_kernels();
  if (cpu_has_avx2() && avx2_kernels() != nullptr) return avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{resolve()};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

bool select(Isa isa) {
  if (isa == Isa::scalar) {
    active().store(&scalar_kernels());
    return true;
  }
  if (!cpu_has_avx2() || avx2_kernels() == nullptr) return false;
  active().store(avx2_kernels());
  return true;
}

std::string_view name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace sgbc::simd
