#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hypereig/error.hpp"
#include "hypereig/hypergraph.hpp"
#include "hypereig/path.hpp"
#include "oracle.hpp"

using namespace hypereig;

namespace {

CVector uniform_unit(int n) {
  return CVector(static_cast<std::size_t>(n), Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

const EigenCurve* curve_starting_near(const std::vector<EigenCurve>& curves, Complex lambda) {
  for (const auto& c : curves) {
    if (std::abs(c.samples.front().lambda - lambda) < 1e-8) return &c;
  }
  return nullptr;
}

}  // namespace

TEST(LinePath, EndpointsAreExact) {
  std::mt19937_64 gen(1);
  const auto a0 = oracle::random_symmetric(gen, 3, 3);
  const auto a1 = oracle::random_symmetric(gen, 3, 3);
  const LinePath path(a0, a1);
  EXPECT_TRUE(approx_equal(path.at(0.0), a0, 0.0));
  EXPECT_TRUE(approx_equal(path.at(1.0), a0 + a1, 0.0));
  const auto between = LinePath::between(a0, a1);
  EXPECT_TRUE(approx_equal(between.b(), a1 - a0, 0.0));
  EXPECT_THROW(LinePath(a0, all_ones_hypermatrix(3, 2)), ShapeError);
}

TEST(Discriminant, Examples) {
  const CVector roots = {0.0, 1.0, 2.0};
  EXPECT_EQ(generalized_discriminant(roots, 3), Complex(16.0, 0.0));
  EXPECT_EQ(generalized_discriminant(roots, 2), Complex(18.0, 0.0));
  EXPECT_EQ(generalized_discriminant(roots, 1), Complex(3.0, 0.0));
  EXPECT_THROW(generalized_discriminant(roots, 0), ParameterError);
  EXPECT_THROW(generalized_discriminant(roots, 4), ParameterError);
  CVector many(60, 1.0);
  EXPECT_THROW(generalized_discriminant(many, 30), CapacityError);
}

TEST(Discriminant, PermutationInvariantOnGaussianIntegers) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> coord(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    // Small Gaussian integers keep every Δ_m an exactly representable integer.
    CVector roots(4);
    for (auto& z : roots) z = Complex(coord(gen), coord(gen));
    for (std::size_t m = 1; m <= roots.size(); ++m) {
      const Complex base = generalized_discriminant(roots, m);
      CVector shuffled = roots;
      std::shuffle(shuffled.begin(), shuffled.end(), gen);
      EXPECT_EQ(generalized_discriminant(shuffled, m), base);
    }
  }
}

TEST(DistinctRootCount, Examples) {
  EXPECT_EQ(distinct_root_count(CVector{1.0, 1.0, 2.0}).distinct_count, 2u);
  EXPECT_EQ(distinct_root_count(CVector{5.0}).distinct_count, 1u);
  EXPECT_THROW(distinct_root_count(CVector{}), ParameterError);

  SymmetricHypermatrix twice_identity = identity_hypermatrix(2, 2).scaled(2.0);
  SymmetricHypermatrix diag12 = identity_hypermatrix(2, 2);
  diag12.set(std::vector<int>{1, 1}, 2.0);
  auto roots_of = [](const SymmetricHypermatrix& a) {
    CVector roots;
    for (const auto& pair : matrix_oracle(a).pairs) roots.push_back(pair.lambda);
    return roots;
  };
  EXPECT_EQ(distinct_root_count(roots_of(twice_identity)).distinct_count, 1u);
  EXPECT_EQ(distinct_root_count(roots_of(diag12)).distinct_count, 2u);
}

TEST(DistinctRootCount, ProfileMatchesDirectEvaluation) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto roots = oracle::random_vector(gen, 6);
    const auto profile = distinct_root_count(roots);
    ASSERT_EQ(profile.delta.size(), profile.roots.size());
    // The relative zero threshold may drop the top orders for random roots.
    EXPECT_LE(profile.distinct_count, 6u);
    EXPECT_GE(profile.distinct_count, 2u);
    for (std::size_t m = 1; m <= profile.roots.size(); ++m) {
      const Complex direct = generalized_discriminant(profile.roots, m);
      EXPECT_LE(std::abs(profile.delta[m - 1] - direct), 1e-10 * std::abs(direct)) << m;
    }
  }
}

TEST(DistinctRootCount, DuplicatesAreMergedAndCountIsBounded) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    CVector roots = oracle::random_vector(gen, 4);
    const std::size_t r = distinct_root_count(roots).distinct_count;
    roots.push_back(roots[trial % 4]);
    const auto profile = distinct_root_count(roots);
    EXPECT_EQ(profile.distinct_count, r);
    EXPECT_EQ(profile.delta.size(), r);
    EXPECT_LE(profile.distinct_count, roots.size());
  }
}

TEST(DistinctRootCount, SkipsOrdersBeyondBudget) {
  CVector roots;
  for (int i = 0; i < 30; ++i) roots.emplace_back(i, 0.0);
  const auto profile = distinct_root_count(roots, 1e-6, 1e-8, 10'000);
  EXPECT_FALSE(profile.evaluated[14]);
  EXPECT_TRUE(std::isnan(profile.log_abs[14]));
  EXPECT_TRUE(profile.evaluated[29]);
  EXPECT_LE(profile.distinct_count, 30u);
}

TEST(SigmaNorm, Examples) {
  const auto j22 = sigma_norm_estimate(all_ones_hypermatrix(2, 2), 16, SigmaDomain::kRealSphere);
  EXPECT_NEAR(j22.value, 2.0, 1e-12);
  EXPECT_NEAR(std::abs(j22.argmax[0]), 1.0 / std::sqrt(2.0), 1e-6);
  const auto j23 = sigma_norm_estimate(all_ones_hypermatrix(2, 3), 16);
  EXPECT_GE(j23.value, std::pow(2.0, 1.5) - 1e-12);
  EXPECT_NEAR(j23.value, std::pow(2.0, 1.5), 1e-10);
  EXPECT_EQ(sigma_norm_estimate(SymmetricHypermatrix(3, 3), 8).value, 0.0);
  EXPECT_NEAR(sigma_norm_estimate(identity_hypermatrix(2, 3), 16).value, 1.0, 1e-12);
}

TEST(SigmaNorm, ValueIsRecomputableAndDeterministic) {
  std::mt19937_64 gen(4);
  const auto b = oracle::random_symmetric(gen, 3, 3);
  const auto est = sigma_norm_estimate(b, 32, SigmaDomain::kComplexSphere, 7);
  EXPECT_NEAR(knorm(est.argmax, 2.0), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(form_value(b, est.argmax)), est.value, 1e-10);
  const auto again = sigma_norm_estimate(b, 32, SigmaDomain::kComplexSphere, 7);
  EXPECT_EQ(est.value, again.value);
  EXPECT_EQ(est.starts_used, 32u);
  // Any unit vector gives a lower bound on the supremum.
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = normalized(oracle::random_vector(gen, 3));
    EXPECT_LE(std::abs(form_value(b, v)), est.value + 1e-12);
  }
}

TEST(DerivativeIdentity, ScaledAllOnesPath) {
  const auto j = all_ones_hypermatrix(2, 3);
  const LinePath path(j, j);
  const double t = 0.5;
  const auto pair = make_eigenpair(path.at(t), uniform_unit(2), 4.0 * (1.0 + t));
  ASSERT_LT(pair.residual, 1e-12);
  const auto check = derivative_identity_check(path, t, pair, 1e-4);
  EXPECT_NEAR(std::abs(check.analytic - Complex(4.0, 0.0)), 0.0, 1e-12);
  EXPECT_LT(check.gap, 1e-6);
}

TEST(DerivativeIdentity, ConstantPath) {
  std::mt19937_64 gen(3);
  const auto a = oracle::random_symmetric(gen, 3, 2);
  const LinePath path(a, SymmetricHypermatrix(3, 2));
  const auto report = enumerate_eigenpairs(a);
  for (const auto& pair : report.pairs) {
    if (pair.degenerate) continue;
    const auto check = derivative_identity_check(path, 0.5, pair, 1e-4);
    EXPECT_EQ(check.analytic, Complex(0.0, 0.0));
    EXPECT_LT(std::abs(check.numeric), 1e-6);
  }
}

TEST(DerivativeIdentity, Errors) {
  const auto j = all_ones_hypermatrix(2, 3);
  const LinePath path(j, j);
  const CVector alternating = {{1.0 / std::sqrt(2.0), 0.0}, {-1.0 / std::sqrt(2.0), 0.0}};
  const auto degenerate = make_eigenpair(j, alternating, 0.0);
  EXPECT_TRUE(degenerate.degenerate);
  EXPECT_THROW(derivative_identity_check(path, 0.5, degenerate, 1e-4), DegeneracyError);
  const auto pair = make_eigenpair(j, uniform_unit(2), 4.0);
  EXPECT_THROW(derivative_identity_check(path, 0.0, pair, 1e-4), ParameterError);
  EXPECT_THROW(derivative_identity_check(path, 1.0, pair, 1e-4), ParameterError);
}

TEST(TrackCurves, ConstantPath) {
  std::mt19937_64 gen(21);
  const auto a = oracle::random_symmetric(gen, 3, 2);
  const auto curves = track_curves(LinePath(a, SymmetricHypermatrix(3, 2)));
  ASSERT_FALSE(curves.empty());
  for (const auto& c : curves) {
    EXPECT_TRUE(c.matched);
    EXPECT_TRUE(c.singular_points.empty());
    EXPECT_EQ(c.samples.back().t, 1.0);
    for (const auto& s : c.samples) EXPECT_LT(std::abs(s.lambda - c.samples.front().lambda), 1e-9);
  }
}

TEST(TrackCurves, DiagonalPath) {
  const auto id = identity_hypermatrix(2, 3);
  const auto curves = track_curves(LinePath::between(id, id.scaled(2.0)));
  ASSERT_EQ(curves.size(), 1u);
  const auto& c = curves[0];
  EXPECT_TRUE(c.singular_points.empty());
  EXPECT_EQ(c.samples.back().t, 1.0);
  for (const auto& s : c.samples) EXPECT_NEAR(std::abs(s.lambda - Complex(1.0 + s.t, 0.0)), 0.0, 1e-9);
}

TEST(TrackCurves, MatrixPathsAgreeWithOracle) {
  std::mt19937_64 gen(314);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a0 = oracle::random_symmetric(gen, 2, 3, true);
    const auto a1 = oracle::random_symmetric(gen, 2, 3, true);
    const auto path = LinePath::between(a0, a1);
    TrackingParams params;
    params.solver.seed = trial;
    const auto curves = track_curves(path, params);
    ASSERT_EQ(curves.size(), 3u);
    for (std::size_t c = 0; c < curves.size(); ++c) {
      EXPECT_TRUE(curves[c].matched);
      for (const auto& s : curves[c].samples) {
        // Real symmetric paths do not cross generically: the c-th smallest stays c-th.
        const auto oracle_values = matrix_oracle(path.at(s.t)).pairs;
        std::vector<double> sorted;
        for (const auto& p : oracle_values) sorted.push_back(p.lambda.real());
        std::sort(sorted.begin(), sorted.end());
        EXPECT_LT(std::abs(s.lambda - Complex(sorted[c], 0.0)), 1e-8) << "trial " << trial << " t " << s.t;
      }
    }
  }
}

TEST(TrackCurves, RandomCubicPathsSatisfyInvariants) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a0 = oracle::random_symmetric(gen, 3, 2);
    const auto a1 = oracle::random_symmetric(gen, 3, 2);
    const auto path = LinePath::between(a0, a1);
    TrackingParams params;
    params.solver.seed = trial;
    const auto curves = track_curves(path, params);
    const auto at_end = enumerate_eigenpairs(a1, params.solver);
    EXPECT_LE(curves.size(), 4u);
    for (const auto& c : curves) {
      for (double t : c.singular_points) {
        EXPECT_GE(t, 0.0);
        EXPECT_LE(t, 1.0);
      }
      if (!c.matched) continue;
      EXPECT_LE(std::abs(c.samples.back().lambda - c.samples.front().lambda), c.variation() + 1e-8);
      const bool reproduced = std::any_of(at_end.distinct_values.begin(), at_end.distinct_values.end(),
                                          [&](Complex z) { return std::abs(z - c.samples.back().lambda) <= 1e-6 * std::max(1.0, std::abs(z)); });
      EXPECT_TRUE(reproduced);
      for (const auto& s : c.samples) {
        EXPECT_LT(s.residual, 1e-8);
        if (s.degenerate || s.singular || s.t < 1e-4 || s.t > 1.0 - 1e-4) continue;
        EigenPair pair{s.v, s.lambda, s.residual, entry_power_sum(s.v, 3), false};
        // Near a complex branch point the third derivative of λ is large and the
        // central difference carries an O(h²) truncation error; the identity
        // must then show second-order convergence instead.
        const double gap = derivative_identity_check(path, s.t, pair, 1e-4).gap;
        if (gap < 1e-5) continue;
        EXPECT_LT(derivative_identity_check(path, s.t, pair, 1e-5).gap, gap / 50.0) << "trial " << trial << " t " << s.t;
      }
    }
  }
}

TEST(TrackCurves, DeterministicAcrossThreadCounts) {
  std::mt19937_64 gen(6);
  const auto a0 = oracle::random_symmetric(gen, 3, 2);
  const auto a1 = oracle::random_symmetric(gen, 3, 2);
  TrackingParams one;
  TrackingParams many;
  many.solver.threads = 4;
  const auto c1 = track_curves(LinePath::between(a0, a1), one);
  const auto c2 = track_curves(LinePath::between(a0, a1), many);
  ASSERT_EQ(c1.size(), c2.size());
  for (std::size_t i = 0; i < c1.size(); ++i) {
    ASSERT_EQ(c1[i].samples.size(), c2[i].samples.size());
    for (std::size_t j = 0; j < c1[i].samples.size(); ++j) EXPECT_EQ(c1[i].samples[j].lambda, c2[i].samples[j].lambda);
  }
}

TEST(WeylGap, IdenticalEndpoints) {
  std::mt19937_64 gen(2);
  const auto a = oracle::random_symmetric(gen, 3, 2);
  const auto r = weyl_gap_experiment(a, a);
  EXPECT_EQ(r.max_matched_gap, 0.0);
  EXPECT_EQ(r.norm_estimate, 0.0);
  EXPECT_EQ(r.ratio, 0.0);
}

TEST(WeylGap, DiagonalScaling) {
  const auto id = identity_hypermatrix(2, 3);
  const auto r = weyl_gap_experiment(id, id.scaled(2.0));
  EXPECT_NEAR(r.max_matched_gap, 1.0, 1e-9);
  EXPECT_GE(r.norm_estimate, 1.0 - 1e-12);
  EXPECT_LE(r.ratio, 1.0 + 1e-8);
}

TEST(WeylGap, CompleteGapPath) {
  const auto a0 = adjacency_hypermatrix(complete_hypergraph(4, 3));
  const auto a1 = all_ones_hypermatrix(4, 3).scaled(0.5);
  ASSERT_TRUE(approx_equal(a1 - a0, complete_gap(4, 3), 1e-15));
  TrackingParams params;
  params.grid_points = 11;
  const auto r = weyl_gap_experiment(a0, a1, params);
  EXPECT_GT(r.curves_completed, 0u);
  EXPECT_GT(r.norm_estimate, 0.0);
  EXPECT_TRUE(std::isfinite(r.max_matched_gap));
}
