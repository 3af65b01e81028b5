#include <immintrin.h>

#include "kernels_internal.hpp"

namespace hypereig::simd::detail {

namespace {

// Two complex doubles per register, interleaved [re0, im0, re1, im1].
inline __m256d load2(const Complex* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }

inline void store2(Complex* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swapped = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swapped, b_im));
}

Complex dotu(const Complex* a, const Complex* b, std::size_t n) {
  __m256d direct = _mm256_setzero_pd();
  __m256d crossed = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    direct = _mm256_fmadd_pd(va, _mm256_movedup_pd(vb), direct);
    crossed = _mm256_fmadd_pd(_mm256_permute_pd(va, 0x5), _mm256_permute_pd(vb, 0xF), crossed);
  }
  const __m256d sum = _mm256_addsub_pd(direct, crossed);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, sum);
  double re = lanes[0] + lanes[2];
  double im = lanes[1] + lanes[3];
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

void matvec(const Complex* mat, std::size_t rows, std::size_t cols, const Complex* x,
            Complex* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dotu(mat + r * cols, x, cols);
}

void hadamard(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, cmul(load2(a + i), load2(b + i)));
  for (; i < n; ++i) {
    out[i] = Complex(a[i].real() * b[i].real() - a[i].imag() * b[i].imag(),
                     a[i].real() * b[i].imag() + a[i].imag() * b[i].real());
  }
}

double norm2_squared(const Complex* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return total;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{&matvec, &dotu, &hadamard, &norm2_squared};
  return table;
}

}  // namespace hypereig::simd::detail
