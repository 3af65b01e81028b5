#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypereig/types.hpp"

namespace hypereig {

// Exact 64-bit counting. Every function throws CapacityError on overflow
// instead of wrapping.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_sub(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_pow(std::uint64_t base, unsigned exponent);
std::uint64_t factorial(unsigned m);
// m (m-1) ... (m-r+1); zero when r > m.
std::uint64_t falling_factorial(std::uint64_t m, unsigned r);
std::uint64_t binomial(std::uint64_t m, std::uint64_t r);

// Number of orderings of a multiset given its multiplicities: (sum m)! / prod m!.
std::uint64_t multinomial(std::span<const int> multiplicities);

// Entry count n^k of a dense cubical hypermatrix. Throws CapacityError when it
// exceeds kDenseCapacity.
inline constexpr std::uint64_t kDenseCapacity = 100'000'000;
std::uint64_t dense_entry_count(int dim, int order);

// Pascal table with binomial(a, b) for a < rows, b < cols; used for colex ranks.
class BinomialTable {
 public:
  BinomialTable() = default;
  BinomialTable(int rows, int cols);

  std::uint64_t operator()(int a, int b) const {
    if (b < 0 || a < b) return 0;
    return table_[static_cast<std::size_t>(a) * cols_ + b];
  }

 private:
  int cols_ = 0;
  std::vector<std::uint64_t> table_;
};

// Colexicographic rank of a strictly increasing k-subset of {0, 1, ...}.
std::uint64_t colex_rank(std::span<const int> combination, const BinomialTable& binom);

// Advance a strictly increasing combination over [0, n) to its colex successor.
// Returns false after the last combination.
bool next_colex_combination(std::span<int> combination, int n);

// Advance a non-decreasing multiindex over [0, n) to its colex successor.
bool next_colex_multiset(std::span<int> multiset, int n);

// Multiplicity of each distinct value in a sorted multiindex, in value order.
void run_lengths(std::span<const int> sorted, std::vector<int>& values, std::vector<int>& counts);

bool is_permutation_of_range(std::span<const int> sigma);

}  // namespace hypereig
