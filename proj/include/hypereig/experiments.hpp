#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hypereig/eigensolver.hpp"
#include "hypereig/rng.hpp"

namespace hypereig {

enum class TailKind { kUpper, kGap };

std::string tail_kind_name(TailKind kind);
TailKind parse_tail_kind(const std::string& name);

struct TailEstimate {
  TailKind kind = TailKind::kUpper;
  int n = 0;
  int k = 0;
  double p = 0.5;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> thresholds;  // ascending
  std::vector<double> survival;    // fraction of trials with ‖X : v^{⊗(k-1)}‖₂ >= t
  std::vector<double> norms;       // per-trial norms, in trial order
  // OLS fit log survival ≈ log C - c t² over thresholds with survival >= 10 / trials.
  double fit_c = 0.0;
  double fit_C = 0.0;
  double fit_r2 = 0.0;
  std::size_t fit_points = 0;
};

/// `count` thresholds from 0 to max(norms), equispaced in t².
std::vector<double> default_tail_thresholds(std::span<const double> norms, std::size_t count = 41);

/// Samples U(n, k, p) (kind upper) or D(n, k, p) (kind gap) `trials` times
/// with per-trial seeds derive_seed(seed, trial stream, i); paired runs of
/// the two kinds with one seed share their edge draws. Empty thresholds
/// select default_tail_thresholds over the observed norms.
TailEstimate tail_estimate(TailKind kind, int n, int k, double p, std::span<const Complex> v,
                           std::size_t trials, std::span<const double> thresholds, std::uint64_t seed,
                           unsigned threads = 1);

struct NetSpec {
  int n = 0;
  int k = 0;
  double delta = 0.0;           // 1 / (4 k √n)
  int grid_radius = 0;          // integer s, s' range over [-grid_radius, grid_radius]
  std::uint64_t grid_size = 0;  // (2 grid_radius + 1)^{2n}
  CVector points;               // V′ row-major, n entries per point
  double size_bound = 0.0;      // (5δ)^{-2n}
  double reference_bound = 0.0; // (5/δ)^{2n}
  bool within_size_bound = false;

  std::size_t size() const { return n == 0 ? 0 : points.size() / static_cast<std::size_t>(n); }
  std::span<const Complex> point(std::size_t i) const {
    return std::span<const Complex>(points).subspan(i * static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  }
};

inline constexpr std::uint64_t kNetCapacity = 100'000'000;

double net_delta(int n, int k);

/// Normalized complex grid V′. Points that are positive multiples of each
/// other are merged exactly by reducing integer coordinates by their gcd.
/// Throws CapacityError when the grid exceeds `capacity` points.
NetSpec build_net(int n, int k, std::uint64_t capacity = kNetCapacity);

/// max_j max(|Re(v_j - w_j)|, |Im(v_j - w_j)|).
double coordinate_gap(std::span<const Complex> v, std::span<const Complex> w);

/// Nearest-point coordinate gap of each probe against the stored net.
std::vector<double> nearest_net_gaps(const NetSpec& net, std::span<const CVector> probes);

struct NetCoverResult {
  double delta = 0.0;
  double max_coord_gap = 0.0;
  std::size_t samples = 0;
  bool pass = false;  // max_coord_gap <= delta + 1e-12
};

/// Uniform random unit probes (probe stream of `seed`) against the stored net.
NetCoverResult net_cover_check(const NetSpec& net, std::size_t samples, std::uint64_t seed);

/// Same probes, each compared with the normalized coordinate rounding of
/// itself onto the grid; needs no stored net, so any n works. The gap is an
/// upper bound on the nearest-point gap.
NetCoverResult implicit_net_cover_check(int n, int k, std::size_t samples, std::uint64_t seed);

CVector random_unit_vector(int n, std::uint64_t seed, Stream stream, std::uint64_t index);

struct RatioStats {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct RadiusStudyRow {
  int n = 0;
  int k = 0;
  double p = 0.5;
  std::size_t trials = 0;             // == radius_samples.size()
  std::vector<double> radius_samples;
  std::vector<std::size_t> found_counts;
  std::vector<double> max_residuals;
  std::size_t solver_failures = 0;    // trials without any converged start
  std::size_t incomplete = 0;         // trials with found_count < expected_count
  std::uint64_t expected_count = 0;
  double bound_value = 0.0;           // B n^{(k-1)/2} √(log n)
  RatioStats ratio_stats;
};

/// Samples D(n, k, p) per n and trial, enumerates its eigenpairs, and
/// tabulates max |λ| against B n^{(k-1)/2} √(log n). Trials run in parallel
/// on solver.threads workers; each enumeration is single-threaded.
std::vector<RadiusStudyRow> radius_scaling_study(int k, std::span<const int> n_list, double p, std::size_t trials,
                                                 double b_const, std::uint64_t seed, const SolverParams& solver = {});

struct HolderSweep {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double min_ratio = 0.0;    // min ‖v^{∘(k-1)}‖₂ / n^{1-k/2}
  double uniform_gap = 0.0;  // |lhs - bound| at the uniform vector
};

/// The uniform vector followed by samples - 1 random unit vectors.
HolderSweep holder_sweep(int n, int k, std::size_t samples, std::uint64_t seed);

}  // namespace hypereig
