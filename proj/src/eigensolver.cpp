#include "hypereig/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hypereig/error.hpp"
#include "hypereig/parallel.hpp"
#include "hypereig/rng.hpp"

namespace hypereig {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// The square polynomial system in (v, λ):
//   F_j = (A : v^{⊗(k-1)})_j - λ v_j^{k-1},   j < n
//   F_n = h·v - 1
// with Jacobian rows (k-1)(A : v^{⊗(k-2)} - λ diag(v^{k-2})), -v^{k-1}, and h.
class EigenSystem {
 public:
  explicit EigenSystem(const SymmetricHypermatrix& a) : a_(a), n_(a.dim()), k_(a.order()) {}

  int dim() const { return n_; }

  double evaluate(const CVector& v, Complex lambda, const CVector& h, VectorXcd& f, MatrixXcd* jac) const {
    const auto reduced = contract_vector_power(a_, v, k_ - 2);
    MatrixXcd m(n_, n_);
    reduced.for_each([&](std::span<const int> s, const Complex& value) {
      m(s[0], s[1]) = value;
      m(s[1], s[0]) = value;
    });
    f.resize(n_ + 1);
    Complex chart{-1.0, 0.0};
    for (int j = 0; j < n_; ++j) {
      Complex g{0.0, 0.0};
      for (int i = 0; i < n_; ++i) g += m(j, i) * v[i];
      f(j) = g - lambda * pow_int(v[j], k_ - 1);
      chart += h[j] * v[j];
    }
    f(n_) = chart;
    if (jac != nullptr) {
      const double km1 = k_ - 1;
      jac->resize(n_ + 1, n_ + 1);
      for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) (*jac)(j, i) = km1 * m(j, i);
        (*jac)(j, j) -= km1 * lambda * pow_int(v[j], k_ - 2);
        (*jac)(j, n_) = -pow_int(v[j], k_ - 1);
        (*jac)(n_, j) = h[j];
      }
      (*jac)(n_, n_) = Complex{0.0, 0.0};
    }
    return f.norm();
  }

  static Complex pow_int(Complex z, int e) {
    Complex out{1.0, 0.0};
    for (int i = 0; i < e; ++i) out *= z;
    return out;
  }

 private:
  const SymmetricHypermatrix& a_;
  int n_;
  int k_;
};

struct NewtonState {
  CVector v;
  Complex lambda;
  double fnorm = std::numeric_limits<double>::infinity();
  int steps = 0;
};

double vector_norm(const CVector& v) { return knorm(v, 2.0); }

// Damped Newton with backtracking on ‖F‖. Stops at fnorm <= target, on
// stagnation, on divergence of v, or after max_steps.
void newton(const EigenSystem& system, NewtonState& state, const CVector& h, int max_steps, double target,
            bool damped) {
  const int n = system.dim();
  VectorXcd f;
  MatrixXcd jac;
  state.fnorm = system.evaluate(state.v, state.lambda, h, f, &jac);
  CVector trial_v(state.v.size());
  VectorXcd trial_f;
  for (state.steps = 0; state.steps < max_steps; ++state.steps) {
    if (state.fnorm <= target || !std::isfinite(state.fnorm)) return;
    const VectorXcd delta = jac.completeOrthogonalDecomposition().solve(-f);
    if (!delta.allFinite()) {
      state.fnorm = std::numeric_limits<double>::infinity();
      return;
    }
    double alpha = 1.0;
    double trial_norm = 0.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      for (int i = 0; i < n; ++i) trial_v[i] = state.v[i] + alpha * delta(i);
      const Complex trial_lambda = state.lambda + alpha * delta(n);
      trial_norm = system.evaluate(trial_v, trial_lambda, h, trial_f, nullptr);
      if (!damped || trial_norm < (1.0 - 1e-4 * alpha) * state.fnorm) {
        state.v = trial_v;
        state.lambda = trial_lambda;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) return;
    if (vector_norm(state.v) > 1e12) {
      state.fnorm = std::numeric_limits<double>::infinity();
      return;
    }
    state.fnorm = system.evaluate(state.v, state.lambda, h, f, &jac);
    if (alpha * delta.norm() <= 1e-15 * (1.0 + vector_norm(state.v) + std::abs(state.lambda))) {
      ++state.steps;
      return;
    }
  }
}

bool projectively_equal(const CVector& a, const CVector& b) {
  Complex inner{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) inner += std::conj(a[i]) * b[i];
  return std::abs(inner) >= 1.0 - 1e-8;
}

bool lambda_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

struct Cluster {
  Complex representative;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<EigenPair> pairs;
};

// Merges accepted pairs into distinct eigenvalues and projectively distinct
// eigenvectors. `accepted` must already be in a deterministic order.
void merge_into_report(std::vector<EigenPair> accepted, double dedup_tol, std::size_t per_value_cap,
                       SpectrumReport& report) {
  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const EigenPair& a, const EigenPair& b) { return lambda_less(a.lambda, b.lambda); });
  std::vector<Cluster> clusters;
  for (auto& pair : accepted) {
    Cluster* home = nullptr;
    for (auto& c : clusters) {
      if (std::abs(pair.lambda - c.representative) <= dedup_tol * std::max(1.0, std::abs(c.representative))) {
        home = &c;
        break;
      }
    }
    if (home == nullptr) {
      clusters.push_back({pair.lambda, pair.residual, {}});
      home = &clusters.back();
    } else if (pair.residual < home->best_residual) {
      home->best_residual = pair.residual;
      home->representative = pair.lambda;
    }
    const bool duplicate = std::any_of(home->pairs.begin(), home->pairs.end(),
                                       [&](const EigenPair& kept) { return projectively_equal(kept.v, pair.v); });
    if (!duplicate && home->pairs.size() < per_value_cap) home->pairs.push_back(std::move(pair));
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return lambda_less(a.representative, b.representative); });
  report.pairs.clear();
  report.distinct_values.clear();
  report.radius = 0.0;
  for (auto& c : clusters) {
    report.distinct_values.push_back(c.representative);
    report.radius = std::max(report.radius, std::abs(c.representative));
    for (auto& p : c.pairs) report.pairs.push_back(std::move(p));
  }
  report.found_count = report.distinct_values.size();
}

}  // namespace

double residual(const SymmetricHypermatrix& a, std::span<const Complex> v, Complex lambda) {
  if (v.size() != static_cast<std::size_t>(a.dim())) throw ShapeError("vector length != dimension");
  if (std::all_of(v.begin(), v.end(), [](const Complex& z) { return z == Complex{0.0, 0.0}; })) {
    throw DegeneracyError("eigenvector must be nonzero");
  }
  CVector defect = contract_to_vector(a, v);
  const CVector power = hadamard_power(v, a.order() - 1);
  for (std::size_t j = 0; j < defect.size(); ++j) defect[j] -= lambda * power[j];
  return knorm(defect, 2.0);
}

Complex rayleigh(const SymmetricHypermatrix& a, std::span<const Complex> v, double tol) {
  if (v.size() != static_cast<std::size_t>(a.dim())) throw ShapeError("vector length != dimension");
  const Complex normalization = entry_power_sum(v, a.order());
  if (std::abs(normalization) <= tol) {
    throw DegeneracyError("v^{:k} vanishes; the Rayleigh quotient is undefined");
  }
  return form_value(a, v) / normalization;
}

PowerIterationResult power_iteration_nonneg(const SymmetricHypermatrix& a, double tol, int max_iters,
                                            std::span<const double> start) {
  if (!a.is_nonnegative()) throw PreconditionError("power iteration needs an entrywise nonnegative hypermatrix");
  const int n = a.dim();
  const int k = a.order();
  PowerIterationResult out;
  out.row_bounds = row_sums(a);

  CVector v(static_cast<std::size_t>(n), Complex{1.0, 0.0});
  if (!start.empty()) {
    if (start.size() != static_cast<std::size_t>(n)) throw ShapeError("start vector length != dimension");
    for (int j = 0; j < n; ++j) {
      if (!(start[j] > 0.0)) throw PreconditionError("start vector must be strictly positive");
      v[j] = start[j];
    }
  }
  v = normalized(v);
  const double root = 1.0 / (k - 1);
  for (out.iterations = 1; out.iterations <= max_iters; ++out.iterations) {
    const CVector image = contract_to_vector(a, v);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool all_positive = true;
    for (int j = 0; j < n; ++j) {
      const double vj = v[j].real();
      if (vj <= 0.0) {
        all_positive = false;
        continue;
      }
      const double ratio = image[j].real() / std::pow(vj, k - 1);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    // Collatz-Wielandt bracket, valid only on strictly positive iterates;
    // intersected with the row-sum bracket, which always holds.
    if (!all_positive) {
      lo = out.row_bounds.min;
      hi = out.row_bounds.max;
    }
    out.lower = std::max(lo, out.row_bounds.min);
    out.upper = std::min(hi, out.row_bounds.max);
    if (out.lower > out.upper) std::swap(out.lower, out.upper);
    out.rho_estimate = 0.5 * (out.lower + out.upper);
    out.estimates.push_back(out.rho_estimate);
    if (out.upper - out.lower < tol) {
      out.converged = true;
      return out;
    }
    CVector next(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) next[j] = std::pow(std::max(image[j].real(), 0.0), root);
    if (knorm(next, 2.0) == 0.0) break;
    v = normalized(next);
  }
  out.iterations = std::min(out.iterations, max_iters);
  out.converged = false;
  return out;
}

std::uint64_t expected_eigenvalue_count(int n, int k) {
  if (n < 1 || k < 2) throw ParameterError("need n >= 1 and k >= 2");
  return checked_mul(static_cast<std::uint64_t>(n),
                     checked_pow(static_cast<std::uint64_t>(k - 1), static_cast<unsigned>(n - 1)));
}

EigenPair make_eigenpair(const SymmetricHypermatrix& a, std::span<const Complex> v, Complex lambda,
                         double degeneracy_tol) {
  EigenPair out;
  out.v = normalized(v);
  std::size_t lead = 0;
  for (std::size_t i = 1; i < out.v.size(); ++i) {
    if (std::abs(out.v[i]) > std::abs(out.v[lead]) * (1.0 + 1e-12)) lead = i;
  }
  const Complex phase = std::conj(out.v[lead]) / std::abs(out.v[lead]);
  for (auto& z : out.v) z *= phase;
  out.v[lead] = Complex{out.v[lead].real(), 0.0};
  out.lambda = lambda;
  out.residual = residual(a, out.v, lambda);
  out.normalization = entry_power_sum(out.v, a.order());
  out.degenerate = std::abs(out.normalization) < degeneracy_tol;
  return out;
}

std::optional<EigenPair> correct_eigenpair(const SymmetricHypermatrix& a, std::span<const Complex> v0,
                                           Complex lambda0, const CorrectorOptions& options) {
  const EigenSystem system(a);
  NewtonState state{normalized(v0), lambda0};
  CVector chart(state.v.size());
  for (std::size_t i = 0; i < chart.size(); ++i) chart[i] = std::conj(state.v[i]);
  newton(system, state, chart, options.max_steps, 0.05 * options.tol, true);
  if (!std::isfinite(state.fnorm) || !std::isfinite(std::abs(state.lambda))) return std::nullopt;
  if (vector_norm(state.v) == 0.0) return std::nullopt;
  auto pair = make_eigenpair(a, state.v, state.lambda, options.degeneracy_tol);
  if (!(pair.residual < options.tol)) return std::nullopt;
  return pair;
}

SpectrumReport enumerate_eigenpairs(const SymmetricHypermatrix& a, const SolverParams& params) {
  const int n = a.dim();
  const int k = a.order();
  SpectrumReport report;
  report.expected_count = expected_eigenvalue_count(n, k);
  if (report.expected_count > kEnumerationCapacity) {
    throw CapacityError("n(k-1)^(n-1) = " + std::to_string(report.expected_count) +
                        " exceeds the enumeration limit of 200");
  }
  const std::size_t starts =
      params.num_starts > 0 ? params.num_starts : static_cast<std::size_t>(20 * report.expected_count);
  report.starts_used = starts;

  const EigenSystem system(a);
  std::vector<std::optional<EigenPair>> results(starts);
  parallel_for(starts, params.threads, [&](std::size_t s) {
    RandomStream rng(params.seed, Stream::kStart, s);
    CVector v(static_cast<std::size_t>(n));
    CVector h(static_cast<std::size_t>(n));
    Complex hv{0.0, 0.0};
    do {
      for (auto& z : v) z = rng.complex_normal();
      for (auto& z : h) z = rng.complex_normal();
      hv = Complex{0.0, 0.0};
      for (int i = 0; i < n; ++i) hv += h[i] * v[i];
    } while (std::abs(hv) < 1e-6);
    for (auto& z : v) z /= hv;

    Complex lambda0;
    const Complex normalization = entry_power_sum(v, k);
    if (std::abs(normalization) > 1e-8 * std::pow(vector_norm(v), k)) {
      lambda0 = form_value(a, v) / normalization;
    } else {
      lambda0 = rng.complex_normal();
    }
    NewtonState state{v, lambda0};
    const double target = 1e-14 * (1.0 + std::abs(lambda0));
    newton(system, state, h, params.max_newton_iters, target, true);
    if (!std::isfinite(state.fnorm) || state.fnorm > 1e-6 * (1.0 + std::abs(state.lambda))) return;
    if (vector_norm(state.v) == 0.0) return;
    auto pair = make_eigenpair(a, state.v, state.lambda, params.degeneracy_tol);
    if (!(pair.residual < params.newton_tol)) {
      auto polished = correct_eigenpair(a, pair.v, pair.lambda,
                                        {5, params.newton_tol, params.degeneracy_tol});
      if (!polished) return;
      pair = std::move(*polished);
    }
    results[s] = std::move(pair);
  });

  std::vector<EigenPair> accepted;
  for (auto& r : results) {
    if (r) accepted.push_back(std::move(*r));
  }
  report.converged_starts = accepted.size();
  if (accepted.empty()) throw SolverError("no start converged to an eigenpair");
  merge_into_report(std::move(accepted), params.dedup_tol, static_cast<std::size_t>(report.expected_count),
                    report);
  return report;
}

SpectrumReport matrix_oracle(const SymmetricHypermatrix& a) {
  if (a.order() != 2) throw ParameterError("matrix oracle needs order 2");
  const int n = a.dim();
  SpectrumReport report;
  report.expected_count = static_cast<std::uint64_t>(n);
  std::vector<EigenPair> pairs;
  if (a.is_real()) {
    Eigen::MatrixXd m(n, n);
    a.for_each([&](std::span<const int> s, const Complex& value) {
      m(s[0], s[1]) = value.real();
      m(s[1], s[0]) = value.real();
    });
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    for (int i = 0; i < n; ++i) {
      CVector v(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) v[j] = solver.eigenvectors()(j, i);
      pairs.push_back(make_eigenpair(a, v, solver.eigenvalues()(i)));
    }
  } else {
    MatrixXcd m(n, n);
    a.for_each([&](std::span<const int> s, const Complex& value) {
      m(s[0], s[1]) = value;
      m(s[1], s[0]) = value;
    });
    Eigen::ComplexEigenSolver<MatrixXcd> solver(m);
    for (int i = 0; i < n; ++i) {
      CVector v(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) v[j] = solver.eigenvectors()(j, i);
      pairs.push_back(make_eigenpair(a, v, solver.eigenvalues()(i)));
    }
  }
  report.starts_used = report.converged_starts = pairs.size();
  merge_into_report(std::move(pairs), 1e-6, static_cast<std::size_t>(n), report);
  return report;
}

double spectral_radius(const SpectrumReport& report) {
  if (report.distinct_values.empty()) throw PreconditionError("spectrum report is empty");
  double radius = 0.0;
  for (const auto& z : report.distinct_values) radius = std::max(radius, std::abs(z));
  return radius;
}

CVector distinct_eigenvalues(std::span<const Complex> values, double tol) {
  CVector sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), lambda_less);
  CVector out;
  for (const auto& z : sorted) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Complex& rep) {
      return std::abs(z - rep) <= tol * std::max(1.0, std::abs(rep));
    });
    if (!seen) out.push_back(z);
  }
  return out;
}

}  // namespace hypereig
