#include "kernels_internal.hpp"

namespace hypereig::simd::detail {

namespace {

// Plain re/im arithmetic; std::complex operator* adds NaN recovery branches
// that the vector variants do not reproduce.
inline void mul_acc(const Complex& a, const Complex& b, double& re, double& im) {
  re += a.real() * b.real() - a.imag() * b.imag();
  im += a.real() * b.imag() + a.imag() * b.real();
}

void matvec(const Complex* mat, std::size_t rows, std::size_t cols, const Complex* x,
            Complex* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const Complex* row = mat + r * cols;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mul_acc(row[c], x[c], re, im);
    y[r] = Complex(re, im);
  }
}

Complex dotu(const Complex* a, const Complex* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) mul_acc(a[i], b[i], re, im);
  return {re, im};
}

void hadamard(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = Complex(a[i].real() * b[i].real() - a[i].imag() * b[i].imag(),
                     a[i].real() * b[i].imag() + a[i].imag() * b[i].real());
  }
}

double norm2_squared(const Complex* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{&matvec, &dotu, &hadamard, &norm2_squared};
  return table;
}

}  // namespace hypereig::simd::detail
