#include <gtest/gtest.h>

#include <set>

#include "hypereig/rng.hpp"

using namespace hypereig;

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST(Philox, KnownAnswerVectors) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, PureFunctionOfIndex) {
  CounterRng a(42, Stream::kEdge);
  CounterRng b(42, Stream::kEdge);
  for (std::uint64_t i : {0ull, 5ull, 1ull << 40, 17ull}) EXPECT_EQ(a.bits64(i), b.bits64(i));
  CounterRng other_stream(42, Stream::kTrial);
  CounterRng other_seed(43, Stream::kEdge);
  EXPECT_NE(a.bits64(0), other_stream.bits64(0));
  EXPECT_NE(a.bits64(0), other_seed.bits64(0));
}

TEST(CounterRng, UniformRangeAndMean) {
  CounterRng rng(1, Stream::kEdge);
  double sum = 0.0;
  const int count = 100000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform(static_cast<std::uint64_t>(i));
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean is sqrt(1/12 / count) ~ 9.1e-4.
  EXPECT_NEAR(sum / count, 0.5, 5e-3);
}

TEST(DeriveSeed, DistinctChildren) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(9, Stream::kTrial, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(9, Stream::kTrial, 3), derive_seed(9, Stream::kTrial, 3));
  EXPECT_NE(derive_seed(9, Stream::kTrial, 3), derive_seed(9, Stream::kStart, 3));
}

TEST(RandomStream, ReproducibleSequence) {
  RandomStream a(5, Stream::kStart, 2);
  RandomStream b(5, Stream::kStart, 2);
  RandomStream c(5, Stream::kStart, 3);
  bool differs = false;
  for (int i = 0; i < 50; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs = differs || x != c.normal();
  }
  EXPECT_TRUE(differs);
}

TEST(RandomStream, NormalMoments) {
  RandomStream s(123, Stream::kVector);
  const int count = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = s.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / count, 0.0, 0.01);
  EXPECT_NEAR(sq / count, 1.0, 0.015);
}
