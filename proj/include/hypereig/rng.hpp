#pragma once

#include <array>
#include <cstdint>

#include "hypereig/types.hpp"

namespace hypereig {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is
/// a pure function of (key, counter), so samples can be produced in any order
/// and from any thread without changing their values.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Independent named streams under one user seed.
enum class Stream : std::uint32_t {
  kEdge = 1,
  kTrial = 2,
  kStart = 3,
  kProbe = 4,
  kVector = 5,
  kChart = 6,
};

/// Random access view: draw(index) depends only on (seed, stream, index).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream);

  std::uint64_t bits64(std::uint64_t index) const;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const;

 private:
  PhiloxKey key_;
  std::uint32_t stream_;
};

/// 64-bit child seed for task `index` of `stream` (per-trial, per-start seeds).
std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index);

/// Sequential draws from the block sequence (seed, stream, substream, 0..).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, Stream stream, std::uint64_t substream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();
  /// Real and imaginary parts independent standard normals.
  Complex complex_normal();

 private:
  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hypereig
