#include <atomic>

#include "hypereig/error.hpp"
#include "kernels_internal.hpp"

namespace hypereig::simd {

namespace {

bool cpu_has_avx2() {
#if defined(HYPEREIG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() { return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar; }

// -1 means "not forced".
std::atomic<int> forced{-1};

}  // namespace

const KernelTable& scalar_kernels() { return detail::scalar_table(); }

const KernelTable* avx2_kernels() {
#if defined(HYPEREIG_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

bool backend_available(Backend backend) {
  return backend == Backend::kScalar || avx2_kernels() != nullptr;
}

Backend active_backend() {
  const int f = forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Backend>(f);
  static const Backend detected = detect();
  return detected;
}

const KernelTable& kernels() {
  return active_backend() == Backend::kAvx2 ? *avx2_kernels() : scalar_kernels();
}

void force_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw ParameterError("SIMD backend " + std::string(backend_name(backend)) + " is unavailable");
  }
  forced.store(static_cast<int>(backend), std::memory_order_relaxed);
}

void reset_backend() { forced.store(-1, std::memory_order_relaxed); }

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace hypereig::simd
