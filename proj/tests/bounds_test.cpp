#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "hypereig/bounds.hpp"
#include "hypereig/combinatorics.hpp"
#include "hypereig/error.hpp"
#include "hypereig/hypergraph.hpp"
#include "oracle.hpp"

using namespace hypereig;
using boost::multiprecision::cpp_int;

namespace {

cpp_int big_pow(int base, int e) {
  cpp_int out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

cpp_int big_falling(int m, int r) {
  cpp_int out = 1;
  for (int i = 0; i < r; ++i) out *= (m - i);
  return out;
}

// Brute-force row sum of row j over all n^{k-1} tails.
double brute_row_sum(const SymmetricHypermatrix& a, int j) {
  const int k = a.order();
  const int n = a.dim();
  std::vector<int> tail(static_cast<std::size_t>(k - 1), 0);
  std::vector<int> full(static_cast<std::size_t>(k));
  double total = 0.0;
  do {
    full[0] = j;
    std::copy(tail.begin(), tail.end(), full.begin() + 1);
    total += a.at(full).real();
  } while (oracle::next_tuple(tail, n));
  return total;
}

}  // namespace

TEST(RowSums, Examples) {
  const auto j = row_sums(all_ones_hypermatrix(3, 3));
  EXPECT_DOUBLE_EQ(j.min, 9.0);
  EXPECT_DOUBLE_EQ(j.max, 9.0);
  EXPECT_TRUE(j.nonnegative);
  const auto k5 = row_sums(adjacency_hypermatrix(complete_hypergraph(5, 3)));
  EXPECT_NEAR(k5.min, 6.0, 1e-13);
  EXPECT_NEAR(k5.max, 6.0, 1e-13);
  const auto signed_rows = row_sums(sign_ensemble(5, 3, 1));
  EXPECT_FALSE(signed_rows.nonnegative);
  EXPECT_TRUE(signed_rows.real);
}

TEST(RowSums, AgreeWithBruteForce) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const int k = 2 + trial % 3;
    const auto a = oracle::random_symmetric(gen, k, n, true);
    const auto r = row_sums(a);
    const auto rd = row_sums(a.to_dense());
    for (int j = 0; j < n; ++j) {
      const double want = brute_row_sum(a, j);
      EXPECT_NEAR(r.per_row[j], want, 1e-12 * std::max(1.0, std::abs(want)));
      EXPECT_NEAR(rd.per_row[j], want, 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

// The row sum of B(n,k) counts anchored tuples with a repeated index, each
// weighted 1/(k-1)!.
TEST(CompleteGapRows, MatchBruteForceAndAnchoredCount) {
  for (int n = 4; n <= 8; ++n) {
    for (int k = 3; k < n && k <= 4; ++k) {
      const auto b = complete_gap(n, k);
      const double predicted =
          static_cast<double>(anchored_repeat_count(n, k)) / static_cast<double>(factorial(k - 1));
      const auto rows = row_sums(b);
      const auto support = support_row_counts(b);
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(brute_row_sum(b, j), predicted, 1e-12 * predicted);
        EXPECT_NEAR(rows.per_row[j], predicted, 1e-12 * predicted);
        EXPECT_EQ(support[j], anchored_repeat_count(n, k));
      }
    }
  }
  EXPECT_DOUBLE_EQ(row_sums(complete_gap(5, 3)).max, 6.5);
  EXPECT_EQ(anchored_repeat_count(5, 3), 13u);
}

TEST(CompleteGapCounting, RepeatedTupleCountValues) {
  EXPECT_EQ(repeated_tuple_count(5, 3), 4u);
  EXPECT_EQ(repeated_tuple_count(6, 4), 65u);
  EXPECT_EQ(repeated_tuple_count(5, 2), 0u);
  EXPECT_THROW(repeated_tuple_count(3, 3), ParameterError);
  EXPECT_DOUBLE_EQ(complete_gap_bound(5, 3), 4.0);
  EXPECT_DOUBLE_EQ(complete_gap_bound(10, 3), 9.0);
  EXPECT_DOUBLE_EQ(complete_gap_bound(6, 4), 12.5);
  EXPECT_THROW(complete_gap_bound(4, 4), ParameterError);
}

TEST(CompleteGapCounting, BoundIsMonotoneInN) {
  for (int k = 3; k <= 6; ++k) {
    for (int n = k + 1; n < 30; ++n) EXPECT_LT(complete_gap_bound(n, k), complete_gap_bound(n + 1, k));
  }
}

// Tuples in [n-1]^{k-1} with a repeated entry: a union bound over the
// C(k-1, 2) slot pairs gives count <= C(k-1, 2) (n-1)^{k-2}. Checked in exact
// arithmetic; the 64-bit library values are cross-checked wherever they fit.
TEST(CompleteGapCounting, RepeatCountUnionBoundExact) {
  for (int n = 4; n <= 50; ++n) {
    for (int k = 3; k < n; ++k) {
      const cpp_int count = big_pow(n - 1, k - 1) - big_falling(n - 1, k - 1);
      EXPECT_LE(count, cpp_int((k - 1) * (k - 2) / 2) * big_pow(n - 1, k - 2)) << n << ' ' << k;
      try {
        EXPECT_EQ(cpp_int(repeated_tuple_count(n, k)), count);
      } catch (const CapacityError&) {
        EXPECT_GT(big_pow(n - 1, k - 1), cpp_int(~0ull));
      }
    }
  }
}

// The sharper factor (k-1) in place of C(k-1, 2) agrees with the union bound
// for k <= 4 only; for every k >= 5 it fails, e.g. 505 > 500 at (n, k) = (6, 5).
TEST(CompleteGapCounting, LinearFactorStepHoldsOnlyUpToFourthOrder) {
  for (int n = 4; n <= 50; ++n) {
    for (int k = 3; k < n; ++k) {
      const cpp_int count = big_pow(n - 1, k - 1) - big_falling(n - 1, k - 1);
      const bool holds = count <= cpp_int(k - 1) * big_pow(n - 1, k - 2);
      EXPECT_EQ(holds, k <= 4) << n << ' ' << k;
    }
  }
  EXPECT_EQ(repeated_tuple_count(6, 5), 505u);
  EXPECT_GT(repeated_tuple_count(6, 5), 4u * 125u);
}

TEST(Holder, Examples) {
  const CVector uniform(4, Complex(0.5, 0.0));
  const auto u = hadamard_power_lower_bound(uniform, 3);
  EXPECT_NEAR(u.lhs, 0.5, 1e-15);
  EXPECT_NEAR(u.bound, 0.5, 1e-15);
  EXPECT_TRUE(u.holds());
  CVector e1(4);
  e1[0] = 1.0;
  const auto e = hadamard_power_lower_bound(e1, 3);
  EXPECT_DOUBLE_EQ(e.lhs, 1.0);
  EXPECT_TRUE(e.holds());
  EXPECT_THROW(hadamard_power_lower_bound(CVector(4, Complex(1.0, 0.0)), 3), PreconditionError);
  EXPECT_THROW(hadamard_power_lower_bound(uniform, 1), ParameterError);
}

TEST(Holder, RandomVectorsNeverViolate) {
  std::mt19937_64 gen(10);
  for (int k : {2, 3, 4}) {
    for (int trial = 0; trial < 2000; ++trial) {
      const auto v = normalized(oracle::random_vector(gen, 5));
      const auto check = hadamard_power_lower_bound(v, k);
      EXPECT_TRUE(check.holds()) << check.lhs << " < " << check.bound;
      if (k == 2) EXPECT_NEAR(check.lhs, 1.0, 1e-12);
    }
  }
}
