#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hypereig/bounds.hpp"
#include "hypereig/hypermatrix.hpp"

namespace hypereig {

/// (v, λ) with A : v^{⊗(k-1)} = λ v^{∘(k-1)}. Pairs produced by this module
/// carry v with unit 2-norm and its largest-modulus entry real positive.
struct EigenPair {
  CVector v;
  Complex lambda;
  double residual = 0.0;       // ‖A : v^{⊗(k-1)} - λ v^{∘(k-1)}‖₂ at the stored v
  Complex normalization;       // v^{:k}
  bool degenerate = false;     // |v^{:k}| below the degeneracy tolerance
};

struct SpectrumReport {
  std::vector<EigenPair> pairs;       // projectively distinct pairs, sorted by λ
  CVector distinct_values;            // one entry per numerically distinct λ
  std::size_t found_count = 0;        // distinct_values.size()
  std::uint64_t expected_count = 0;   // n (k-1)^{n-1}, with multiplicity
  double radius = 0.0;                // max |λ| over distinct_values
  std::size_t starts_used = 0;
  std::size_t converged_starts = 0;

  /// When fewer values than the theoretical count were found, radius is only
  /// a lower bound on the spectral radius.
  bool possibly_incomplete() const { return found_count < expected_count; }
};

struct SolverParams {
  std::size_t num_starts = 0;  // 0 selects 20 x expected_count
  double newton_tol = 1e-10;   // residual acceptance threshold
  double dedup_tol = 1e-6;     // relative merge radius for eigenvalues
  double degeneracy_tol = 1e-8;
  int max_newton_iters = 200;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

inline constexpr std::uint64_t kEnumerationCapacity = 200;

double residual(const SymmetricHypermatrix& a, std::span<const Complex> v, Complex lambda);

/// (A : v^{⊗k}) / v^{:k}. Throws DegeneracyError when |v^{:k}| <= tol.
Complex rayleigh(const SymmetricHypermatrix& a, std::span<const Complex> v, double tol = 1e-8);

struct PowerIterationResult {
  double rho_estimate = 0.0;
  double lower = 0.0;  // certified bracket after the last iteration
  double upper = 0.0;
  int iterations = 0;
  bool converged = false;
  RowSumBounds row_bounds;
  std::vector<double> estimates;  // running estimate after every iteration
};

/// Shift-free power iteration v <- (A : v^{⊗(k-1)})^{∘1/(k-1)} for entrywise
/// nonnegative A, bracketing rho(A) by the min/max componentwise ratios
/// intersected with the row-sum bracket. Default start is the all-ones vector.
PowerIterationResult power_iteration_nonneg(const SymmetricHypermatrix& a, double tol = 1e-10,
                                            int max_iters = 1000, std::span<const double> start = {});

/// n (k-1)^{n-1}, the degree of the characteristic polynomial.
std::uint64_t expected_eigenvalue_count(int n, int k);

/// Multistart damped Newton on {A : v^{⊗(k-1)} - λ v^{∘(k-1)} = 0, h·v = 1}
/// with a random affine chart h per start.
SpectrumReport enumerate_eigenpairs(const SymmetricHypermatrix& a, const SolverParams& params = {});

/// Classical eigendecomposition of an order-2 hypermatrix.
SpectrumReport matrix_oracle(const SymmetricHypermatrix& a);

/// max |λ| over the report; throws PreconditionError when it is empty.
double spectral_radius(const SpectrumReport& report);

/// Rescales v to unit 2-norm with a real positive leading entry and fills in
/// residual, normalization, and the degeneracy flag.
EigenPair make_eigenpair(const SymmetricHypermatrix& a, std::span<const Complex> v, Complex lambda,
                         double degeneracy_tol = 1e-8);

struct CorrectorOptions {
  int max_steps = 10;
  double tol = 1e-10;
  double degeneracy_tol = 1e-8;
};

/// Newton correction from (v0, λ0) in the local chart conj(v0)·v = ‖v0‖².
/// Returns the converged pair when it reaches residual < tol within
/// max_steps steps, otherwise nothing.
std::optional<EigenPair> correct_eigenpair(const SymmetricHypermatrix& a, std::span<const Complex> v0,
                                           Complex lambda0, const CorrectorOptions& options = {});

/// Merges values closer than tol * max(1, |λ|); output sorted by (re, im).
CVector distinct_eigenvalues(std::span<const Complex> values, double tol);

}  // namespace hypereig
