#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypereig/hypermatrix.hpp"

namespace hypereig {

/// Slice sums r_j = sum_{i2..ik} a_{j i2..ik} and their extremes. For an
/// entrywise nonnegative A these bracket the spectral radius:
/// min_j r_j <= rho(A) <= max_j r_j. The bracket is only meaningful when
/// `nonnegative` is set.
struct RowSumBounds {
  std::vector<double> per_row;
  double min = 0.0;
  double max = 0.0;
  bool nonnegative = false;
  bool real = false;
};

RowSumBounds row_sums(const SymmetricHypermatrix& a);
RowSumBounds row_sums(const GeneralHypermatrix& a);

/// Exact number of tuples (i2..ik) in [n]^{k-1} with a_{j i2..ik} != 0, per j.
std::vector<std::uint64_t> support_row_counts(const SymmetricHypermatrix& a);

/// (n-1)^{k-1} - (n-1)(n-2)...(n-k+1), the count used in the complete-gap
/// argument. Requires n > k >= 2.
std::uint64_t repeated_tuple_count(int n, int k);

/// Tuples (j, i2, ..., ik) over [n] with some repeated index, for fixed j:
/// n^{k-1} - (n-1)(n-2)...(n-k+1). This is the support size of every row of
/// B(n, k).
std::uint64_t anchored_repeat_count(int n, int k);

/// (n-1)^{k-2} / (k-2)!, the claimed bound on rho(B(n, k)). Requires n > k.
double complete_gap_bound(int n, int k);

struct HolderCheck {
  double lhs = 0.0;    // ‖v^{∘(k-1)}‖₂
  double bound = 0.0;  // n^{1 - k/2}
  bool holds() const { return lhs >= bound - 1e-12; }
};

/// Lower bound ‖v^{∘(k-1)}‖₂ >= ‖v‖₂² n^{1-k/2} for a unit vector v.
/// Throws PreconditionError unless |‖v‖₂ - 1| <= 1e-10.
HolderCheck hadamard_power_lower_bound(std::span<const Complex> v, int k);

}  // namespace hypereig
