#include "hypereig/hypermatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hypereig/error.hpp"
#include "hypereig/simd.hpp"

namespace hypereig {

namespace {

constexpr std::uint64_t kCompactCapacity = 100'000'000;

std::size_t compact_count(int order, int dim) {
  if (order < 0 || dim < 1) throw ParameterError("hypermatrix needs order >= 0 and dimension >= 1");
  const std::uint64_t count =
      binomial(static_cast<std::uint64_t>(dim) + order - 1, static_cast<std::uint64_t>(order));
  if (count > kCompactCapacity) throw CapacityError("compact symmetric storage exceeds 1e8 entries");
  return static_cast<std::size_t>(count);
}

void require_valid_shape(int dim, int order) {
  if (dim < 1) throw ParameterError("dimension must be >= 1, got " + std::to_string(dim));
  if (order < 2) throw ParameterError("order must be >= 2, got " + std::to_string(order));
}

std::vector<double> inverse_factorials(int up_to) {
  std::vector<double> out(static_cast<std::size_t>(up_to) + 1, 1.0);
  double f = 1.0;
  for (int i = 1; i <= up_to; ++i) {
    f *= i;
    out[i] = 1.0 / f;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// SymmetricHypermatrix

SymmetricHypermatrix::SymmetricHypermatrix(int order, int dim)
    : order_(order),
      dim_(dim),
      binom_(dim + order + 1, order + 2),
      values_(compact_count(order, dim), Complex{0.0, 0.0}) {}

SymmetricHypermatrix::SymmetricHypermatrix(int order, int dim, CVector compact_values)
    : SymmetricHypermatrix(order, dim) {
  if (compact_values.size() != values_.size()) {
    throw ShapeError("compact array has " + std::to_string(compact_values.size()) +
                     " entries, expected " + std::to_string(values_.size()));
  }
  values_ = std::move(compact_values);
}

void SymmetricHypermatrix::check_index(std::span<const int> index) const {
  if (index.size() != static_cast<std::size_t>(order_)) {
    throw ShapeError("multiindex length " + std::to_string(index.size()) + " != order " +
                     std::to_string(order_));
  }
  for (int i : index) {
    if (i < 0 || i >= dim_) throw ParameterError("multiindex entry out of range");
  }
}

std::uint64_t SymmetricHypermatrix::rank_combination_of(std::span<const int> sorted) const {
  std::uint64_t r = 0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    r += binom_(sorted[j] + static_cast<int>(j), static_cast<int>(j) + 1);
  }
  return r;
}

std::size_t SymmetricHypermatrix::rank(std::span<const int> index) const {
  check_index(index);
  MultiIndex sorted(index.begin(), index.end());
  std::sort(sorted.begin(), sorted.end());
  return rank_sorted(sorted);
}

Complex SymmetricHypermatrix::at(std::span<const int> index) const { return values_[rank(index)]; }

void SymmetricHypermatrix::set(std::span<const int> index, Complex value) {
  values_[rank(index)] = value;
}

GeneralHypermatrix SymmetricHypermatrix::to_dense() const {
  GeneralHypermatrix out(order_, dim_);
  MultiIndex index(static_cast<std::size_t>(order_));
  MultiIndex sorted(static_cast<std::size_t>(order_));
  auto data = out.data();
  for (std::size_t off = 0; off < data.size(); ++off) {
    out.unravel(off, index);
    sorted = index;
    std::sort(sorted.begin(), sorted.end());
    data[off] = values_[rank_sorted(sorted)];
  }
  return out;
}

bool SymmetricHypermatrix::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& z) { return z.imag() == 0.0; });
}

bool SymmetricHypermatrix::is_nonnegative(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [tol](const Complex& z) {
    return std::abs(z.imag()) <= tol && z.real() >= -tol;
  });
}

SymmetricHypermatrix SymmetricHypermatrix::operator+(const SymmetricHypermatrix& other) const {
  if (order_ != other.order_ || dim_ != other.dim_) throw ShapeError("shape mismatch in sum");
  CVector out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] + other.values_[i];
  return {order_, dim_, std::move(out)};
}

SymmetricHypermatrix SymmetricHypermatrix::operator-(const SymmetricHypermatrix& other) const {
  if (order_ != other.order_ || dim_ != other.dim_) throw ShapeError("shape mismatch in difference");
  CVector out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] - other.values_[i];
  return {order_, dim_, std::move(out)};
}

SymmetricHypermatrix SymmetricHypermatrix::scaled(Complex factor) const {
  CVector out(values_);
  for (auto& z : out) z *= factor;
  return {order_, dim_, std::move(out)};
}

// ---------------------------------------------------------------------------
// GeneralHypermatrix

GeneralHypermatrix::GeneralHypermatrix(int order, int dim)
    : order_(order),
      dim_(dim),
      data_(static_cast<std::size_t>(dense_entry_count(dim, order)), Complex{0.0, 0.0}) {}

GeneralHypermatrix::GeneralHypermatrix(int order, int dim, CVector data) : GeneralHypermatrix(order, dim) {
  if (data.size() != data_.size()) {
    throw ShapeError("dense array has " + std::to_string(data.size()) + " entries, expected " +
                     std::to_string(data_.size()));
  }
  data_ = std::move(data);
}

GeneralHypermatrix GeneralHypermatrix::from_vector(std::span<const Complex> v) {
  if (v.empty()) throw ParameterError("empty vector");
  return {1, static_cast<int>(v.size()), CVector(v.begin(), v.end())};
}

GeneralHypermatrix GeneralHypermatrix::scalar(Complex value, int dim) {
  return {0, dim, CVector{value}};
}

std::size_t GeneralHypermatrix::offset(std::span<const int> index) const {
  if (index.size() != static_cast<std::size_t>(order_)) throw ShapeError("multiindex length != order");
  std::size_t off = 0;
  for (int i : index) {
    if (i < 0 || i >= dim_) throw ParameterError("multiindex entry out of range");
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return off;
}

void GeneralHypermatrix::unravel(std::size_t off, std::span<int> index) const {
  for (std::size_t j = index.size(); j-- > 0;) {
    index[j] = static_cast<int>(off % static_cast<std::size_t>(dim_));
    off /= static_cast<std::size_t>(dim_);
  }
}

bool GeneralHypermatrix::is_symmetric(double tol) const {
  MultiIndex index(static_cast<std::size_t>(order_));
  for (std::size_t off = 0; off < data_.size(); ++off) {
    unravel(off, index);
    std::sort(index.begin(), index.end());
    if (std::abs(data_[offset(index)] - data_[off]) > tol) return false;
  }
  return true;
}

SymmetricHypermatrix GeneralHypermatrix::to_symmetric(double tol) const {
  if (!is_symmetric(tol)) throw PreconditionError("hypermatrix is not symmetric");
  return SymmetricHypermatrix::generate(order_, dim_, [&](std::span<const int> sorted) {
    return data_[offset(sorted)];
  });
}

// ---------------------------------------------------------------------------
// Constructors

SymmetricHypermatrix identity_hypermatrix(int dim, int order) {
  require_valid_shape(dim, order);
  return SymmetricHypermatrix::generate(order, dim, [](std::span<const int> s) {
    return s.front() == s.back() ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  });
}

SymmetricHypermatrix all_ones_hypermatrix(int dim, int order) {
  require_valid_shape(dim, order);
  return {order, dim, CVector(compact_count(order, dim), Complex{1.0, 0.0})};
}

// ---------------------------------------------------------------------------
// Products

SymmetricHypermatrix hadamard(const SymmetricHypermatrix& a, const SymmetricHypermatrix& b) {
  if (a.order() != b.order() || a.dim() != b.dim()) throw ShapeError("Hadamard product needs equal shapes");
  CVector out(a.compact_size());
  simd::kernels().hadamard(a.compact().data(), b.compact().data(), out.data(), out.size());
  return {a.order(), a.dim(), std::move(out)};
}

GeneralHypermatrix hadamard(const GeneralHypermatrix& a, const GeneralHypermatrix& b) {
  if (a.order() != b.order() || a.dim() != b.dim()) throw ShapeError("Hadamard product needs equal shapes");
  CVector out(a.size());
  simd::kernels().hadamard(a.data().data(), b.data().data(), out.data(), out.size());
  return {a.order(), a.dim(), std::move(out)};
}

GeneralHypermatrix tensor_product(const GeneralHypermatrix& a, const GeneralHypermatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("tensor product of cubical operands needs a common dimension");
  GeneralHypermatrix out(a.order() + b.order(), a.dim());
  auto dst = out.data();
  const auto lhs = a.data();
  const auto rhs = b.data();
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t j = 0; j < rhs.size(); ++j) dst[i * rhs.size() + j] = lhs[i] * rhs[j];
  }
  return out;
}

GeneralHypermatrix tensor_power(const GeneralHypermatrix& x, int m) {
  if (m < 1) throw ParameterError("tensor power needs m >= 1");
  GeneralHypermatrix out = x;
  for (int i = 1; i < m; ++i) out = tensor_product(x, out);
  return out;
}

// ---------------------------------------------------------------------------
// Contractions

GeneralHypermatrix contract(const GeneralHypermatrix& a, std::span<const int> slots,
                            const GeneralHypermatrix& b) {
  const int k = a.order();
  const int s = static_cast<int>(slots.size());
  if (b.order() != s) {
    throw ParameterError("slot set size " + std::to_string(s) + " != order of B " +
                         std::to_string(b.order()));
  }
  if (a.dim() != b.dim()) throw ShapeError("contraction needs a common dimension");
  std::vector<int> contracted(slots.begin(), slots.end());
  std::sort(contracted.begin(), contracted.end());
  if (std::adjacent_find(contracted.begin(), contracted.end()) != contracted.end() ||
      (s > 0 && (contracted.front() < 0 || contracted.back() >= k))) {
    throw ParameterError("slot set must list distinct slots of A");
  }
  std::vector<int> layout;
  for (int t = 0; t < k; ++t) {
    if (!std::binary_search(contracted.begin(), contracted.end(), t)) layout.push_back(t);
  }
  layout.insert(layout.end(), contracted.begin(), contracted.end());

  const int n = a.dim();
  GeneralHypermatrix out(k - s, n);
  const std::size_t cols = b.size();
  const std::size_t rows = out.size();

  bool identity_layout = true;
  for (int t = 0; t < k; ++t) identity_layout = identity_layout && layout[t] == t;
  if (identity_layout) {
    simd::kernels().matvec(a.data().data(), rows, cols, b.data().data(), out.data().data());
    return out;
  }
  // Reorder A so the contracted slots are trailing and contiguous.
  CVector reordered(a.size());
  MultiIndex index(static_cast<std::size_t>(k));
  MultiIndex moved(static_cast<std::size_t>(k));
  for (std::size_t off = 0; off < a.size(); ++off) {
    a.unravel(off, index);
    for (int t = 0; t < k; ++t) moved[t] = index[layout[t]];
    std::size_t dst = 0;
    for (int t = 0; t < k; ++t) dst = dst * n + static_cast<std::size_t>(moved[t]);
    reordered[dst] = a.data()[off];
  }
  simd::kernels().matvec(reordered.data(), rows, cols, b.data().data(), out.data().data());
  return out;
}

GeneralHypermatrix contract(const SymmetricHypermatrix& a, const GeneralHypermatrix& b) {
  if (b.order() > a.order()) throw ParameterError("B has higher order than A");
  std::vector<int> slots(static_cast<std::size_t>(b.order()));
  std::iota(slots.begin(), slots.end(), a.order() - b.order());
  return contract(a.to_dense(), slots, b);
}

SymmetricHypermatrix contract_vector_power(const SymmetricHypermatrix& a, std::span<const Complex> v,
                                           int m) {
  const int k = a.order();
  const int n = a.dim();
  if (m < 0 || m > k) throw ParameterError("vector power m must lie in [0, order]");
  if (v.size() != static_cast<std::size_t>(n)) {
    throw ShapeError("vector length " + std::to_string(v.size()) + " != dimension " + std::to_string(n));
  }
  if (m == 0) return a;

  // powers[d * (m + 1) + e] = v_d^e / e!
  std::vector<Complex> scaled_powers(static_cast<std::size_t>(n) * (m + 1));
  const auto inv_fact = inverse_factorials(k);
  for (int d = 0; d < n; ++d) {
    Complex p{1.0, 0.0};
    for (int e = 0; e <= m; ++e) {
      scaled_powers[static_cast<std::size_t>(d) * (m + 1) + e] = p * inv_fact[e];
      p *= v[d];
    }
  }
  double m_factorial = 1.0;
  for (int i = 2; i <= m; ++i) m_factorial *= i;

  SymmetricHypermatrix shape(k - m, n);
  CVector out(shape.compact_size(), Complex{0.0, 0.0});
  std::vector<int> values;
  std::vector<int> counts;
  MultiIndex remainder;
  remainder.reserve(static_cast<std::size_t>(k));

  // Each sorted multiindex s of A splits into a contracted sub-multiset q of
  // size m and a free remainder r; (A : v^{⊗m})_r collects A_s times the
  // number of orderings of q times prod v^q.
  auto split = [&](auto&& self, std::size_t pos, int left, Complex weight, Complex entry) -> void {
    if (pos == values.size()) {
      if (left == 0) out[shape.rank_sorted(remainder)] += entry * weight * m_factorial;
      return;
    }
    const int d = values[pos];
    const int c = counts[pos];
    for (int q = std::min(c, left); q >= 0; --q) {
      const std::size_t before = remainder.size();
      remainder.insert(remainder.end(), static_cast<std::size_t>(c - q), d);
      self(self, pos + 1, left - q, weight * scaled_powers[static_cast<std::size_t>(d) * (m + 1) + q],
           entry);
      remainder.resize(before);
    }
  };

  a.for_each([&](std::span<const int> sorted, const Complex& entry) {
    if (entry == Complex{0.0, 0.0}) return;
    run_lengths(sorted, values, counts);
    remainder.clear();
    split(split, 0, m, Complex{1.0, 0.0}, entry);
  });
  return {k - m, n, std::move(out)};
}

GeneralHypermatrix apply_vector_power(const SymmetricHypermatrix& a, std::span<const Complex> v, int m) {
  if (m < 1) throw ParameterError("vector power m must be >= 1");
  return contract_vector_power(a, v, m).to_dense();
}

GeneralHypermatrix apply_vector_power(const GeneralHypermatrix& a, std::span<const Complex> v, int m) {
  const int n = a.dim();
  if (m < 1 || m > a.order()) throw ParameterError("vector power m must lie in [1, order]");
  if (v.size() != static_cast<std::size_t>(n)) throw ShapeError("vector length != dimension");
  CVector current(a.data().begin(), a.data().end());
  CVector next;
  for (int step = 0; step < m; ++step) {
    const std::size_t rows = current.size() / static_cast<std::size_t>(n);
    next.assign(rows, Complex{0.0, 0.0});
    simd::kernels().matvec(current.data(), rows, static_cast<std::size_t>(n), v.data(), next.data());
    current.swap(next);
  }
  return {a.order() - m, n, std::move(current)};
}

CVector contract_to_vector(const SymmetricHypermatrix& a, std::span<const Complex> v) {
  const auto reduced = contract_vector_power(a, v, a.order() - 1);
  return CVector(reduced.compact().begin(), reduced.compact().end());
}

Complex form_value(const SymmetricHypermatrix& a, std::span<const Complex> v) {
  return contract_vector_power(a, v, a.order()).compact().front();
}

// ---------------------------------------------------------------------------
// Entry sums and norms

Complex entry_power_sum(const SymmetricHypermatrix& a, int t) {
  if (t < 1) throw ParameterError("power t must be >= 1");
  Complex total{0.0, 0.0};
  std::vector<int> values;
  std::vector<int> counts;
  a.for_each([&](std::span<const int> sorted, const Complex& entry) {
    if (entry == Complex{0.0, 0.0}) return;
    run_lengths(sorted, values, counts);
    total += static_cast<double>(multinomial(counts)) * std::pow(entry, t);
  });
  return total;
}

Complex entry_power_sum(const GeneralHypermatrix& a, int t) {
  return entry_power_sum(a.data(), t);
}

Complex entry_power_sum(std::span<const Complex> v, int t) {
  if (t < 1) throw ParameterError("power t must be >= 1");
  Complex total{0.0, 0.0};
  for (const auto& z : v) {
    Complex p = z;
    for (int i = 1; i < t; ++i) p *= z;
    total += p;
  }
  return total;
}

GeneralHypermatrix permute_indices(const GeneralHypermatrix& a, std::span<const int> sigma) {
  const int k = a.order();
  if (sigma.size() != static_cast<std::size_t>(k) || !is_permutation_of_range(sigma)) {
    throw ParameterError("sigma is not a permutation of the slots");
  }
  GeneralHypermatrix out(k, a.dim());
  MultiIndex index(static_cast<std::size_t>(k));
  MultiIndex source(static_cast<std::size_t>(k));
  for (std::size_t off = 0; off < out.size(); ++off) {
    out.unravel(off, index);
    for (int j = 0; j < k; ++j) source[j] = index[sigma[j]];
    out.data()[off] = a.at(source);
  }
  return out;
}

std::vector<int> compose_permutations(std::span<const int> outer, std::span<const int> inner) {
  if (outer.size() != inner.size()) throw ParameterError("permutation sizes differ");
  std::vector<int> out(inner.size());
  for (std::size_t j = 0; j < inner.size(); ++j) out[j] = outer[inner[j]];
  return out;
}

std::vector<int> inverse_permutation(std::span<const int> sigma) {
  if (!is_permutation_of_range(sigma)) throw ParameterError("not a permutation");
  std::vector<int> out(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) out[sigma[j]] = static_cast<int>(j);
  return out;
}

GeneralHypermatrix permutation_sum(const GeneralHypermatrix& a) {
  std::vector<int> sigma(static_cast<std::size_t>(a.order()));
  std::iota(sigma.begin(), sigma.end(), 0);
  GeneralHypermatrix total(a.order(), a.dim());
  do {
    const auto term = permute_indices(a, sigma);
    for (std::size_t i = 0; i < total.size(); ++i) total.data()[i] += term.data()[i];
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

double knorm(std::span<const Complex> v, double p) {
  if (!(p >= 1.0)) throw ParameterError("k-norm needs k >= 1");
  if (p == 2.0) return std::sqrt(simd::kernels().norm2_squared(v.data(), v.size()));
  double total = 0.0;
  for (const auto& z : v) total += std::pow(std::abs(z), p);
  return std::pow(total, 1.0 / p);
}

CVector normalized(std::span<const Complex> v) {
  const double norm = knorm(v, 2.0);
  if (norm == 0.0) throw DegeneracyError("cannot normalize the zero vector");
  CVector out(v.begin(), v.end());
  for (auto& z : out) z /= norm;
  return out;
}

CVector hadamard_power(std::span<const Complex> v, int e) {
  if (e < 0) throw ParameterError("Hadamard power needs e >= 0");
  CVector out(v.size(), Complex{1.0, 0.0});
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (int j = 0; j < e; ++j) out[i] *= v[i];
  }
  return out;
}

bool approx_equal(const SymmetricHypermatrix& a, const SymmetricHypermatrix& b, double tol) {
  if (a.order() != b.order() || a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.compact_size(); ++i) {
    if (std::abs(a.compact()[i] - b.compact()[i]) > tol) return false;
  }
  return true;
}

bool approx_equal(const GeneralHypermatrix& a, const GeneralHypermatrix& b, double tol) {
  if (a.order() != b.order() || a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.data()[i] - b.data()[i]) > tol) return false;
  }
  return true;
}

}  // namespace hypereig
