#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hypereig/eigensolver.hpp"

namespace hypereig {

/// A(t) = A0 + t B on t in [0, 1].
class LinePath {
 public:
  LinePath(SymmetricHypermatrix a0, SymmetricHypermatrix b);
  /// Path from a0 to a1, i.e. B = a1 - a0.
  static LinePath between(const SymmetricHypermatrix& a0, const SymmetricHypermatrix& a1);

  const SymmetricHypermatrix& a0() const { return a0_; }
  const SymmetricHypermatrix& b() const { return b_; }
  /// A(0) is A0 and A(1) is A0 + B entrywise, without rounding differences.
  SymmetricHypermatrix at(double t) const;

 private:
  SymmetricHypermatrix a0_;
  SymmetricHypermatrix b_;
};

struct CurveSample {
  double t = 0.0;
  Complex lambda;
  CVector v;
  double residual = 0.0;
  bool degenerate = false;  // |v^{:k}| below the degeneracy tolerance
  bool singular = false;    // adjacent to a recorded singular point
  int depth = 0;            // bisection depth at which the step was accepted
};

struct EigenCurve {
  std::size_t id = 0;
  std::vector<CurveSample> samples;  // increasing t
  bool matched = true;               // reached t = 1 by accepted continuation steps
  bool broken = false;
  double broken_at = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> singular_points;  // sorted, within [0, 1]

  /// Σ |λ(t_{i+1}) - λ(t_i)| over consecutive samples.
  double variation() const;
};

struct TrackingParams {
  int grid_points = 21;        // uniform base grid including both ends
  int refine_depth = 20;       // bisections allowed below a base interval
  int corrector_steps = 10;    // Newton steps allowed per accepted step
  double merge_tol = 1e-6;     // relative; collisions between curves
  SolverParams solver;         // t = 0 enumeration, newton_tol, threads
};

/// One curve per distinct eigenvalue of A(0), continued across the grid by
/// predictor-corrector steps. A step is accepted when the corrector converges
/// within corrector_steps with residual < newton_tol and lands near the
/// prediction; otherwise the step is halved. When refine_depth halvings do
/// not suffice the point is recorded as singular and the curve is restarted
/// just past it; if that fails too the curve is marked broken there.
/// Base grid points where curves collide (fewer distinct values than curves)
/// are also recorded as singular.
std::vector<EigenCurve> track_curves(const LinePath& path, const TrackingParams& params = {});

struct DerivativeCheck {
  Complex analytic;  // B : w^{⊗k} with w = v scaled so w^{:k} = 1
  Complex numeric;   // central difference of the continued eigenvalue
  double gap = 0.0;
};

/// Compares dλ/dt = B : w^{⊗k} (w^{:k} = 1) with (λ(t+h) - λ(t-h)) / 2h,
/// where λ(t±h) is obtained by Newton continuation from the given pair.
/// Throws DegeneracyError for a degenerate pair, ParameterError when
/// [t-h, t+h] leaves [0, 1], SingularityError when continuation fails.
DerivativeCheck derivative_identity_check(const LinePath& path, double t, const EigenPair& pair, double h = 1e-4);

enum class SigmaDomain { kComplexSphere, kRealSphere };

struct SigmaNormEstimate {
  double value = 0.0;        // |B : argmax^{⊗k}|, a lower bound on the supremum
  CVector argmax;
  std::size_t starts_used = 0;
  SigmaDomain domain = SigmaDomain::kComplexSphere;
  std::string domain_label;  // human-readable domain and objective
};

/// Multistart projected ascent of |B : v^{⊗k}| over the unit 2-sphere.
/// Starts always include 1̂/√n and the coordinate vectors; the remaining
/// starts are Gaussian draws from the probe stream of `seed`.
SigmaNormEstimate sigma_norm_estimate(const SymmetricHypermatrix& b, std::size_t num_starts = 64,
                                      SigmaDomain domain = SigmaDomain::kComplexSphere, std::uint64_t seed = 0);

struct WeylGapResult {
  double max_matched_gap = 0.0;  // max over completed curves of |λ(1) - λ(0)|
  double norm_estimate = 0.0;    // sigma_norm_estimate(A1 - A0)
  double ratio = 0.0;            // gap / norm (0 when both vanish)
  std::size_t curves_total = 0;
  std::size_t curves_completed = 0;
  std::vector<double> singular_points;
  std::string domain_label;
};

/// Tracks A0 -> A1 and compares the largest endpoint gap with the Σ-norm
/// estimate of A1 - A0. Ratios above one are findings, not failures, since
/// the norm estimate is only a lower bound. Throws ExperimentError when no
/// curve reaches t = 1.
WeylGapResult weyl_gap_experiment(const SymmetricHypermatrix& a0, const SymmetricHypermatrix& a1,
                                  const TrackingParams& params = {}, std::size_t sigma_starts = 64);

/// Δ_m = Σ_{|S| = m} Π_{i, j ∈ S, i ≠ j} (λ_i - λ_j)^2 with the product over
/// ordered pairs. Throws ParameterError unless 1 <= m <= roots.size(), and
/// CapacityError when C(r, m) exceeds subset_budget.
Complex generalized_discriminant(std::span<const Complex> roots, std::size_t m,
                                 std::uint64_t subset_budget = 5'000'000);

struct DiscriminantProfile {
  CVector roots;                // merged, tolerance-distinct
  CVector delta;                // Δ_m for m = 1..roots.size(); NaN where skipped
  std::vector<double> log_abs;  // log |Δ_m|; -inf for an exact zero, NaN where skipped
  std::vector<bool> evaluated;  // false where C(r, m) exceeded the subset budget
  std::size_t distinct_count = 0;
};

/// Merges roots closer than merge_tol (relative), evaluates Δ_m for each m,
/// and returns the largest m with |Δ_m| > zero_tol * max_m |Δ_m|.
DiscriminantProfile distinct_root_count(std::span<const Complex> roots, double merge_tol = 1e-6,
                                        double zero_tol = 1e-8, std::uint64_t subset_budget = 5'000'000);

}  // namespace hypereig
