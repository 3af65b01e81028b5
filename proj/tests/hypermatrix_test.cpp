#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hypereig/error.hpp"
#include "hypereig/hypergraph.hpp"
#include "hypereig/hypermatrix.hpp"
#include "hypereig/hypermatrix_json.hpp"
#include "hypereig/simd.hpp"
#include "oracle.hpp"

using namespace hypereig;

namespace {

CVector ones(int n) { return CVector(static_cast<std::size_t>(n), Complex(1.0, 0.0)); }

GeneralHypermatrix vec(std::initializer_list<double> xs) {
  CVector v;
  for (double x : xs) v.emplace_back(x, 0.0);
  return GeneralHypermatrix::from_vector(v);
}

}  // namespace

TEST(Identity, DiagonalOnly) {
  const auto id = identity_hypermatrix(2, 3);
  auto dense = id.to_dense();
  int ones_seen = 0;
  std::vector<int> idx(3, 0);
  do {
    const bool diagonal = idx[0] == idx[1] && idx[1] == idx[2];
    EXPECT_EQ(dense.at(idx), Complex(diagonal ? 1.0 : 0.0, 0.0));
    ones_seen += diagonal;
  } while (oracle::next_tuple(idx, 2));
  EXPECT_EQ(ones_seen, 2);

  const auto single = identity_hypermatrix(1, 4);
  EXPECT_EQ(single.compact_size(), 1u);
  EXPECT_EQ(single.compact()[0], Complex(1.0, 0.0));

  EXPECT_EQ(entry_power_sum(identity_hypermatrix(3, 3), 1), Complex(3.0, 0.0));
}

TEST(Identity, RejectsBadShape) {
  EXPECT_THROW(identity_hypermatrix(0, 3), ParameterError);
  EXPECT_THROW(identity_hypermatrix(3, 1), ParameterError);
  EXPECT_THROW(all_ones_hypermatrix(2, 0), ParameterError);
}

TEST(AllOnes, EqualsTensorPowerOfOnes) {
  for (int n : {2, 3}) {
    for (int k : {2, 3}) {
      const auto j = all_ones_hypermatrix(n, k).to_dense();
      const auto power = tensor_power(GeneralHypermatrix::from_vector(ones(n)), k);
      ASSERT_EQ(j.size(), power.size());
      for (std::size_t i = 0; i < j.size(); ++i) EXPECT_EQ(j.data()[i], power.data()[i]);
    }
  }
}

TEST(Hadamard, Examples) {
  const auto j = all_ones_hypermatrix(2, 3);
  EXPECT_TRUE(approx_equal(hadamard(j, j), j, 0.0));
  EXPECT_TRUE(approx_equal(hadamard(identity_hypermatrix(3, 3), all_ones_hypermatrix(3, 3)),
                           identity_hypermatrix(3, 3), 0.0));
  const auto a = adjacency_hypermatrix(complete_hypergraph(4, 3));
  const auto sq = hadamard(a, a);
  sq.for_each([&](std::span<const int> idx, Complex value) {
    const bool distinct = std::adjacent_find(idx.begin(), idx.end()) == idx.end();
    EXPECT_EQ(value, Complex(distinct ? 0.25 : 0.0, 0.0));
  });
  EXPECT_THROW(hadamard(j, all_ones_hypermatrix(3, 3)), ShapeError);
  EXPECT_THROW(hadamard(j, all_ones_hypermatrix(2, 2)), ShapeError);
}

TEST(TensorProduct, Examples) {
  const auto one = vec({1, 1});
  EXPECT_TRUE(approx_equal(tensor_product(one, one), all_ones_hypermatrix(2, 2).to_dense(), 0.0));
  const auto v2 = tensor_power(vec({1, 2}), 2);
  ASSERT_EQ(v2.size(), 4u);
  const double expected[] = {1, 2, 2, 4};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(v2.data()[i], Complex(expected[i], 0.0));
  EXPECT_TRUE(approx_equal(tensor_power(one, 3), all_ones_hypermatrix(2, 3).to_dense(), 0.0));
}

TEST(Contract, Examples) {
  const auto j23 = all_ones_hypermatrix(2, 3);
  const auto rows = contract(j23, tensor_power(vec({1, 1}), 2));
  ASSERT_EQ(rows.order(), 1);
  EXPECT_EQ(rows.data()[0], Complex(4.0, 0.0));
  EXPECT_EQ(rows.data()[1], Complex(4.0, 0.0));

  const auto sq = contract(identity_hypermatrix(3, 3), tensor_power(vec({1, 2, 3}), 2));
  EXPECT_EQ(sq.data()[0], Complex(1.0, 0.0));
  EXPECT_EQ(sq.data()[1], Complex(4.0, 0.0));
  EXPECT_EQ(sq.data()[2], Complex(9.0, 0.0));

  const auto full = contract(j23, j23.to_dense());
  ASSERT_EQ(full.order(), 0);
  EXPECT_EQ(full.data()[0], Complex(8.0, 0.0));
}

TEST(Contract, Errors) {
  const auto a = all_ones_hypermatrix(2, 3).to_dense();
  const int two_slots[] = {0, 1};
  EXPECT_THROW(contract(a, two_slots, vec({1, 1})), ParameterError);
  EXPECT_THROW(contract(a, two_slots, tensor_power(vec({1, 1, 1}), 2)), ShapeError);
  const int repeated[] = {1, 1};
  EXPECT_THROW(contract(a, repeated, tensor_power(vec({1, 1}), 2)), ParameterError);
  const int out_of_range[] = {0, 3};
  EXPECT_THROW(contract(a, out_of_range, tensor_power(vec({1, 1}), 2)), ParameterError);
  EXPECT_THROW(apply_vector_power(all_ones_hypermatrix(2, 3), ones(3), 1), ShapeError);
  EXPECT_THROW(apply_vector_power(all_ones_hypermatrix(2, 3), ones(2), 4), ParameterError);
}

TEST(ApplyVectorPower, Examples) {
  const auto r = apply_vector_power(all_ones_hypermatrix(2, 3), ones(2), 2);
  EXPECT_EQ(r.data()[0], Complex(4.0, 0.0));
  EXPECT_EQ(r.data()[1], Complex(4.0, 0.0));
  EXPECT_EQ(form_value(all_ones_hypermatrix(3, 3), ones(3)), Complex(27.0, 0.0));
  const auto adj = adjacency_hypermatrix(complete_hypergraph(3, 3));
  const auto row = contract_to_vector(adj, ones(3));
  for (const auto& z : row) EXPECT_NEAR(std::abs(z - Complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(EntryPowerSum, Examples) {
  EXPECT_EQ(entry_power_sum(ones(2), 3), Complex(2.0, 0.0));
  EXPECT_EQ(entry_power_sum(all_ones_hypermatrix(2, 3), 2), Complex(8.0, 0.0));
  const CVector alt = {Complex(1, 0), Complex(-1, 0)};
  EXPECT_EQ(entry_power_sum(alt, 3), Complex(0.0, 0.0));
  // Compact and dense forms count every multiindex the same way.
  std::mt19937_64 gen(11);
  const auto a = oracle::random_symmetric(gen, 3, 3);
  EXPECT_LT(std::abs(entry_power_sum(a, 2) - entry_power_sum(a.to_dense(), 2)), 1e-12);
}

// Every one of the 100 instances is checked against the nested-loop oracle,
// both for contraction over a random slot subset and for the compact
// symmetric fast path.
TEST(Contract, MatchesNestedLoopOracle) {
  std::mt19937_64 gen(20240601);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const int k = 2 + static_cast<int>(gen() % 3);
    const int s = 1 + static_cast<int>(gen() % k);

    const auto a = oracle::random_dense(gen, k, n);
    std::vector<int> slots(static_cast<std::size_t>(k));
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), gen);
    slots.resize(static_cast<std::size_t>(s));
    const auto b = oracle::random_dense(gen, s, n);

    const auto got = contract(a, slots, b);
    const auto want = oracle::naive_contract(
        k, n, [&](std::span<const int> i) { return a.at(i); }, slots, b);
    ASSERT_EQ(got.size(), want.size());
    const double scale = std::max(1.0, oracle::max_abs(want.data()));
    EXPECT_LE(oracle::max_abs_diff(got.data(), want.data()) / scale, 1e-12) << "trial " << trial;

    const auto sym = oracle::random_symmetric(gen, k, n);
    const auto v = oracle::random_vector(gen, n);
    const int m = 1 + static_cast<int>(gen() % k);
    std::vector<int> last(static_cast<std::size_t>(m));
    std::iota(last.begin(), last.end(), k - m);
    const auto vm = tensor_power(GeneralHypermatrix::from_vector(v), m);
    const auto sym_want = oracle::naive_contract(
        k, n, [&](std::span<const int> i) { return sym.at(i); }, last, vm);
    const auto sym_got = apply_vector_power(sym, v, m);
    const double sym_scale = std::max(1.0, oracle::max_abs(sym_want.data()));
    EXPECT_LE(oracle::max_abs_diff(sym_got.data(), sym_want.data()) / sym_scale, 1e-12)
        << "trial " << trial;
    const auto dense_got = apply_vector_power(sym.to_dense(), v, m);
    EXPECT_LE(oracle::max_abs_diff(dense_got.data(), sym_want.data()) / sym_scale, 1e-12);
  }
}

TEST(Contract, FrobeniusSpecialisationIsExactOnScalarKernels) {
  simd::force_backend(simd::Backend::kScalar);
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_dense(gen, 3, 3);
    const auto b = oracle::random_dense(gen, 3, 3);
    const int all[] = {0, 1, 2};
    const Complex got = contract(a, all, b).data()[0];
    Complex want{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Complex x = a.data()[i];
      const Complex y = b.data()[i];
      want += Complex(x.real() * y.real() - x.imag() * y.imag(),
                      x.real() * y.imag() + x.imag() * y.real());
    }
    EXPECT_EQ(got, want);
  }
  simd::reset_backend();
}

TEST(ApplyVectorPower, MultilinearExpansion) {
  std::mt19937_64 gen(77);
  const int n = 3;
  const int k = 3;
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::random_symmetric(gen, k, n);
    const auto u = oracle::random_vector(gen, n);
    const auto w = oracle::random_vector(gen, n);
    const Complex alpha(0.7, -0.2);
    const Complex beta(-1.3, 0.4);
    CVector mix(n);
    for (int i = 0; i < n; ++i) mix[i] = alpha * u[i] + beta * w[i];

    Complex expanded{0.0, 0.0};
    const auto ug = GeneralHypermatrix::from_vector(u);
    const auto wg = GeneralHypermatrix::from_vector(w);
    const double binom[] = {1, 3, 3, 1};
    for (int j = 0; j <= k; ++j) {
      GeneralHypermatrix term = GeneralHypermatrix::scalar(Complex(1.0, 0.0), n);
      if (j > 0) term = tensor_power(ug, j);
      if (k - j > 0) term = j > 0 ? tensor_product(term, tensor_power(wg, k - j)) : tensor_power(wg, k);
      expanded += binom[j] * std::pow(alpha, j) * std::pow(beta, k - j) * contract(a, term).data()[0];
    }
    const Complex direct = form_value(a, mix);
    EXPECT_LT(std::abs(direct - expanded), 1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST(Symmetric, LookupIsPermutationInvariantExhaustively) {
  std::mt19937_64 gen(3);
  for (auto [n, k] : {std::pair{6, 4}, std::pair{10, 5}, std::pair{3, 6}}) {
    const auto a = oracle::random_symmetric(gen, k, n);
    const auto dense = a.to_dense();
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    do {
      const Complex base = a.at(idx);
      EXPECT_EQ(dense.at(idx), base);
      std::vector<int> perm = idx;
      std::sort(perm.begin(), perm.end());
      do {
        ASSERT_EQ(a.at(perm), base);
      } while (std::next_permutation(perm.begin(), perm.end()));
    } while (oracle::next_tuple(idx, n));
    EXPECT_TRUE(dense.is_symmetric(0.0));
    EXPECT_TRUE(approx_equal(dense.to_symmetric(), a, 0.0));
  }
}

TEST(Symmetric, RealInputsHaveExactlyZeroImaginaryParts) {
  for (const auto& a : {identity_hypermatrix(3, 3), all_ones_hypermatrix(2, 4), complete_gap(5, 3),
                        random_gap(6, 3, 0.3, 9), adjacency_hypermatrix(complete_hypergraph(5, 3))}) {
    EXPECT_TRUE(a.is_real());
    for (const auto& z : a.compact()) EXPECT_EQ(z.imag(), 0.0);
  }
}

TEST(Symmetric, RejectsBadIndex) {
  SymmetricHypermatrix a(3, 2);
  const int too_short[] = {0, 1};
  const int out_of_range[] = {0, 1, 2};
  EXPECT_THROW(a.at(too_short), ShapeError);
  EXPECT_THROW(a.at(out_of_range), ParameterError);
  EXPECT_THROW(SymmetricHypermatrix(3, 2, CVector(3)), ShapeError);
  GeneralHypermatrix g(2, 2);
  g.at(std::vector<int>{0, 1}) = 1.0;
  EXPECT_FALSE(g.is_symmetric());
  EXPECT_THROW(g.to_symmetric(), PreconditionError);
}

TEST(Permute, IdentityAndInverse) {
  std::mt19937_64 gen(8);
  const auto a = oracle::random_dense(gen, 3, 3);
  const int id[] = {0, 1, 2};
  EXPECT_TRUE(approx_equal(permute_indices(a, id), a, 0.0));
  const int sigma[] = {1, 2, 0};
  const auto inv = inverse_permutation(sigma);
  EXPECT_TRUE(approx_equal(permute_indices(permute_indices(a, sigma), inv), a, 0.0));
  const int bad[] = {0, 0, 1};
  EXPECT_THROW(permute_indices(a, bad), ParameterError);
  const int short_sigma[] = {1, 0};
  EXPECT_THROW(permute_indices(a, short_sigma), ParameterError);
}

TEST(Permute, SingleNonzeroMovesToImageIndex) {
  // Entry 1 at one-based (1,2,3); σ is the cycle 1→2→3→1.
  GeneralHypermatrix u(3, 3);
  u.at(std::vector<int>{0, 1, 2}) = 1.0;
  const int sigma[] = {1, 2, 0};
  const auto moved = permute_indices(u, sigma);
  // out[i] = in[(i_σ(0), i_σ(1), i_σ(2))] = in[(i_1, i_2, i_0)], nonzero when that is (0,1,2).
  std::vector<int> idx(3, 0);
  do {
    const bool hit = idx == std::vector<int>{2, 0, 1};
    EXPECT_EQ(moved.at(idx), Complex(hit ? 1.0 : 0.0, 0.0));
  } while (oracle::next_tuple(idx, 3));
}

TEST(Permute, CompositionLaw) {
  std::mt19937_64 gen(99);
  std::vector<int> sigma = {0, 1, 2};
  std::vector<int> tau = {0, 1, 2};
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_dense(gen, 3, 3);
    std::shuffle(sigma.begin(), sigma.end(), gen);
    std::shuffle(tau.begin(), tau.end(), gen);
    const auto twice = permute_indices(permute_indices(a, sigma), tau);
    const auto once = permute_indices(a, compose_permutations(tau, sigma));
    EXPECT_TRUE(approx_equal(twice, once, 0.0));
  }
}

TEST(Permute, PermutationSumIsSymmetric) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 5; ++trial) {
    GeneralHypermatrix u = upper_ensemble(3, 3, 0.5, gen());
    const auto s = permutation_sum(u);
    EXPECT_TRUE(s.is_symmetric(0.0));
    const auto r = oracle::random_dense(gen, 3, 3);
    EXPECT_TRUE(permutation_sum(r).is_symmetric(1e-12));
  }
}

TEST(Knorm, Examples) {
  EXPECT_DOUBLE_EQ(knorm(CVector{{3, 0}, {4, 0}}, 2), 5.0);
  EXPECT_NEAR(knorm(ones(4), 4), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(knorm(CVector{{1, 0}, {-2, 0}}, 1), 3.0);
  EXPECT_THROW(knorm(ones(2), 0.5), ParameterError);
  EXPECT_THROW(normalized(CVector(3)), DegeneracyError);
  std::mt19937_64 gen(4);
  const auto v = normalized(oracle::random_vector(gen, 7));
  EXPECT_NEAR(knorm(v, 2), 1.0, 1e-15);
}

TEST(Json, RoundTrip) {
  std::mt19937_64 gen(1);
  const auto a = oracle::random_symmetric(gen, 3, 4);
  const auto doc = to_json(a);
  EXPECT_EQ(doc["order"], 3);
  EXPECT_EQ(doc["dim"], 4);
  EXPECT_TRUE(approx_equal(symmetric_from_json(doc), a, 0.0));
  const auto sparse = to_json(identity_hypermatrix(3, 3));
  EXPECT_EQ(sparse["entries"].size(), 3u);
  EXPECT_EQ(sparse["entries"][0][0], (nlohmann::json{1, 1, 1}));
  EXPECT_THROW(symmetric_from_json(nlohmann::json{{"order", 3}}), ParseError);
  auto bad = sparse;
  bad["entries"][0][0] = nlohmann::json{1, 1, 9};
  EXPECT_THROW(symmetric_from_json(bad), ParseError);
}
