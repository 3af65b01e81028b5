#include "hypereig/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "hypereig/error.hpp"

namespace hypereig {

namespace {

void require_gap_shape(int n, int k) {
  if (k < 2 || n <= k) throw ParameterError("complete-gap quantities need n > k >= 2");
}

RowSumBounds summarize(const CVector& sums) {
  RowSumBounds out;
  out.per_row.reserve(sums.size());
  out.real = true;
  for (const auto& z : sums) {
    out.per_row.push_back(z.real());
    out.real = out.real && z.imag() == 0.0;
  }
  out.min = *std::min_element(out.per_row.begin(), out.per_row.end());
  out.max = *std::max_element(out.per_row.begin(), out.per_row.end());
  return out;
}

}  // namespace

RowSumBounds row_sums(const SymmetricHypermatrix& a) {
  const CVector ones(static_cast<std::size_t>(a.dim()), Complex{1.0, 0.0});
  auto out = summarize(contract_to_vector(a, ones));
  out.nonnegative = a.is_nonnegative();
  return out;
}

RowSumBounds row_sums(const GeneralHypermatrix& a) {
  const CVector ones(static_cast<std::size_t>(a.dim()), Complex{1.0, 0.0});
  const auto reduced = apply_vector_power(a, ones, a.order() - 1);
  auto out = summarize(CVector(reduced.data().begin(), reduced.data().end()));
  out.nonnegative = std::all_of(a.data().begin(), a.data().end(),
                                [](const Complex& z) { return z.imag() == 0.0 && z.real() >= 0.0; });
  return out;
}

std::vector<std::uint64_t> support_row_counts(const SymmetricHypermatrix& a) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(a.dim()), 0);
  std::vector<int> values;
  std::vector<int> mult;
  a.for_each([&](std::span<const int> sorted, const Complex& entry) {
    if (entry == Complex{0.0, 0.0}) return;
    run_lengths(sorted, values, mult);
    // Orderings with a fixed first slot j: drop one copy of j and count the rest.
    for (std::size_t i = 0; i < values.size(); ++i) {
      --mult[i];
      counts[values[i]] = checked_add(counts[values[i]], multinomial(mult));
      ++mult[i];
    }
  });
  return counts;
}

std::uint64_t repeated_tuple_count(int n, int k) {
  require_gap_shape(n, k);
  const auto base = static_cast<std::uint64_t>(n - 1);
  return checked_sub(checked_pow(base, static_cast<unsigned>(k - 1)),
                     falling_factorial(base, static_cast<unsigned>(k - 1)));
}

std::uint64_t anchored_repeat_count(int n, int k) {
  require_gap_shape(n, k);
  return checked_sub(checked_pow(static_cast<std::uint64_t>(n), static_cast<unsigned>(k - 1)),
                     falling_factorial(static_cast<std::uint64_t>(n - 1), static_cast<unsigned>(k - 1)));
}

double complete_gap_bound(int n, int k) {
  require_gap_shape(n, k);
  const auto numerator = checked_pow(static_cast<std::uint64_t>(n - 1), static_cast<unsigned>(k - 2));
  return static_cast<double>(numerator) / static_cast<double>(factorial(static_cast<unsigned>(k - 2)));
}

HolderCheck hadamard_power_lower_bound(std::span<const Complex> v, int k) {
  if (k < 2) throw ParameterError("order k must be >= 2");
  if (std::abs(knorm(v, 2.0) - 1.0) > 1e-10) throw PreconditionError("vector must have unit 2-norm");
  const double n = static_cast<double>(v.size());
  return {knorm(hadamard_power(v, k - 1), 2.0), std::pow(n, 1.0 - 0.5 * k)};
}

}  // namespace hypereig
