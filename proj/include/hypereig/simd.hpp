#pragma once

#include <cstddef>
#include <string_view>

#include "hypereig/types.hpp"

// Dense complex kernels behind the contraction, Hadamard and norm paths.
// Each kernel has a scalar reference implementation and, where the build
// and CPU allow it, an AVX2/FMA variant selected once at runtime.
namespace hypereig::simd {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  // y[r] = sum_c mat[r * cols + c] * x[c]   (no conjugation)
  void (*matvec)(const Complex* mat, std::size_t rows, std::size_t cols, const Complex* x,
                 Complex* y);
  // sum_i a[i] * b[i]   (no conjugation)
  Complex (*dotu)(const Complex* a, const Complex* b, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*hadamard)(const Complex* a, const Complex* b, Complex* out, std::size_t n);
  // sum_i |a[i]|^2
  double (*norm2_squared)(const Complex* a, std::size_t n);
};

const KernelTable& scalar_kernels();

// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

bool backend_available(Backend backend);

// Best available backend unless overridden by force_backend.
Backend active_backend();
const KernelTable& kernels();

// Pins the dispatch (tests and benchmarks). Throws ParameterError when the
// requested backend is unavailable.
void force_backend(Backend backend);
void reset_backend();

std::string_view backend_name(Backend backend);

}  // namespace hypereig::simd
