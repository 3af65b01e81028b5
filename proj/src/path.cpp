#include "hypereig/path.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypereig/combinatorics.hpp"
#include "hypereig/error.hpp"
#include "hypereig/parallel.hpp"
#include "hypereig/rng.hpp"

namespace hypereig {

LinePath::LinePath(SymmetricHypermatrix a0, SymmetricHypermatrix b) : a0_(std::move(a0)), b_(std::move(b)) {
  if (a0_.order() != b_.order() || a0_.dim() != b_.dim()) throw ShapeError("path endpoints need equal shapes");
}

LinePath LinePath::between(const SymmetricHypermatrix& a0, const SymmetricHypermatrix& a1) {
  if (a0.order() != a1.order() || a0.dim() != a1.dim()) throw ShapeError("path endpoints need equal shapes");
  return LinePath(a0, a1 - a0);
}

SymmetricHypermatrix LinePath::at(double t) const {
  const auto base = a0_.compact();
  const auto slope = b_.compact();
  CVector values(base.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = base[i] + slope[i] * t;
  return SymmetricHypermatrix(a0_.order(), a0_.dim(), std::move(values));
}

double EigenCurve::variation() const {
  double total = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) total += std::abs(samples[i].lambda - samples[i - 1].lambda);
  return total;
}

namespace {

Complex inner(const CVector& a, const CVector& b) {
  Complex out{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) out += std::conj(a[i]) * b[i];
  return out;
}

// v rotated by a unit phase so that <ref, v> is real and nonnegative.
CVector aligned(const CVector& v, const CVector& ref) {
  const Complex ip = inner(ref, v);
  if (std::abs(ip) == 0.0) return v;
  const Complex phase = std::conj(ip) / std::abs(ip);
  CVector out(v);
  for (auto& z : out) z *= phase;
  return out;
}

// dλ/dt = (B : v^{⊗k}) / v^{:k}; zero when v^{:k} is too small to divide by.
Complex slope_at(const SymmetricHypermatrix& b, const CVector& v, double degeneracy_tol) {
  const Complex norm = entry_power_sum(v, b.order());
  if (std::abs(norm) < degeneracy_tol) return {0.0, 0.0};
  return form_value(b, v) / norm;
}

CurveSample to_sample(double t, const EigenPair& pair, int depth) {
  CurveSample s;
  s.t = t;
  s.lambda = pair.lambda;
  s.v = pair.v;
  s.residual = pair.residual;
  s.degenerate = pair.degenerate;
  s.depth = depth;
  return s;
}

void add_singular_point(EigenCurve& curve, double t) {
  auto& pts = curve.singular_points;
  if (std::find(pts.begin(), pts.end(), t) == pts.end()) pts.insert(std::upper_bound(pts.begin(), pts.end(), t), t);
}

constexpr int kMaxRestarts = 64;
constexpr double kLocalErrorTol = 1e-3;

class CurveTracker {
 public:
  CurveTracker(const LinePath& path, const TrackingParams& params) : path_(path), params_(params) {}

  EigenCurve track(std::size_t id, const EigenPair& start) const {
    EigenCurve curve;
    curve.id = id;
    curve.samples.push_back(to_sample(0.0, start, 0));
    std::size_t segment_start = 0;  // first sample after the latest restart
    int restarts = 0;
    const int intervals = params_.grid_points - 1;
    const double base = 1.0 / intervals;
    for (int g = 1; g <= intervals; ++g) {
      const double target = (g == intervals) ? 1.0 : g * base;
      double step = target - curve.samples.back().t;
      int depth = 0;
      while (curve.samples.back().t < target) {
        const double remaining = target - curve.samples.back().t;
        const double t_next = step >= remaining ? target : curve.samples.back().t + step;
        if (auto sample = advance(curve, segment_start, t_next, depth)) {
          curve.samples.push_back(std::move(*sample));
          if (depth > 0) {
            step *= 2.0;
            --depth;
          }
          continue;
        }
        step *= 0.5;
        if (++depth <= params_.refine_depth) continue;

        const double t_stuck = curve.samples.back().t;
        add_singular_point(curve, t_stuck);
        curve.samples.back().singular = true;
        auto restarted = ++restarts <= kMaxRestarts ? restart(curve.samples.back(), target, step) : std::nullopt;
        if (!restarted) {
          curve.broken = true;
          curve.matched = false;
          curve.broken_at = t_stuck;
          return curve;
        }
        segment_start = curve.samples.size();
        curve.samples.push_back(std::move(*restarted));
        step = target - curve.samples.back().t;
        depth = 0;
      }
    }
    return curve;
  }

 private:
  CorrectorOptions corrector(int steps) const {
    return {steps, params_.solver.newton_tol, params_.solver.degeneracy_tol};
  }

  // One predictor-corrector step to t_next; empty when rejected.
  std::optional<CurveSample> advance(const EigenCurve& curve, std::size_t segment_start, double t_next,
                                     int depth) const {
    const CurveSample& last = curve.samples.back();
    const double dt = t_next - last.t;
    const Complex slope = slope_at(path_.b(), last.v, params_.solver.degeneracy_tol);
    CVector v_pred = last.v;
    Complex lambda_pred = last.lambda + dt * slope;
    if (curve.samples.size() - segment_start >= 2) {
      const CurveSample& prev = curve.samples[curve.samples.size() - 2];
      const double ratio = dt / (last.t - prev.t);
      const CVector prev_v = aligned(prev.v, last.v);
      for (std::size_t i = 0; i < v_pred.size(); ++i) v_pred[i] += ratio * (last.v[i] - prev_v[i]);
      lambda_pred = last.lambda + ratio * (last.lambda - prev.lambda);
    }
    const auto pair = correct_eigenpair(path_.at(t_next), v_pred, lambda_pred, corrector(params_.corrector_steps));
    if (!pair) return std::nullopt;

    // Local error of the tangent step, ~ dt^2 |λ''| / 2. Bounding it makes the
    // step resolve curvature, so near-crossings are not jumped diabatically.
    const double scale = 1.0 + std::abs(last.lambda);
    const double local_error = std::abs(pair->lambda - (last.lambda + dt * slope));
    if (!(local_error <= kLocalErrorTol * scale)) return std::nullopt;
    if (std::abs(inner(last.v, pair->v)) < 0.7) return std::nullopt;
    return to_sample(t_next, *pair, depth);
  }

  // Steps over a point where continuation stalled: corrects from the last
  // accepted pair at geometrically growing distances, without the
  // continuity test.
  std::optional<CurveSample> restart(const CurveSample& last, double target, double min_step) const {
    double step = std::max(2.0 * min_step, 1e-12);
    for (int attempt = 0; attempt < 12 && last.t < target; ++attempt, step *= 4.0) {
      const double t_next = std::min(target, last.t + step);
      const auto pair = correct_eigenpair(path_.at(t_next), last.v, last.lambda, corrector(50));
      if (pair) {
        auto sample = to_sample(t_next, *pair, params_.refine_depth);
        sample.singular = true;
        return sample;
      }
      if (t_next >= target) break;
    }
    return std::nullopt;
  }

  const LinePath& path_;
  const TrackingParams& params_;
};

// Flags base-grid points where two live curves collide.
void flag_collisions(std::vector<EigenCurve>& curves, const TrackingParams& params) {
  const int intervals = params.grid_points - 1;
  for (int g = 0; g <= intervals; ++g) {
    const double t = (g == intervals) ? 1.0 : g * (1.0 / intervals);
    std::vector<std::pair<std::size_t, std::size_t>> live;  // (curve, sample)
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const auto& s = curves[c].samples;
      auto it = std::lower_bound(s.begin(), s.end(), t, [](const CurveSample& x, double v) { return x.t < v; });
      if (it != s.end() && it->t == t) live.emplace_back(c, static_cast<std::size_t>(it - s.begin()));
    }
    if (live.size() < 2) continue;
    CVector values;
    for (auto [c, i] : live) values.push_back(curves[c].samples[i].lambda);
    // Collisions are judged on the merged root set. The Δ_m count with its
    // relative zero threshold undercounts well-separated roots once there
    // are more than a handful, so it is not used as the trigger here.
    const std::size_t distinct = distinct_eigenvalues(values, params.merge_tol).size();
    if (distinct >= values.size()) continue;
    std::vector<std::tuple<double, std::size_t, std::size_t>> gaps;
    for (std::size_t a = 0; a < live.size(); ++a) {
      for (std::size_t b = a + 1; b < live.size(); ++b) gaps.emplace_back(std::abs(values[a] - values[b]), a, b);
    }
    std::sort(gaps.begin(), gaps.end());
    const std::size_t drop = values.size() - distinct;
    for (std::size_t d = 0; d < drop && d < gaps.size(); ++d) {
      for (std::size_t which : {std::get<1>(gaps[d]), std::get<2>(gaps[d])}) {
        auto [c, i] = live[which];
        curves[c].samples[i].singular = true;
        add_singular_point(curves[c], t);
      }
    }
  }
}

// Streaming Σ exp(L_s + iθ_s) that never forms the individual terms.
struct LogSum {
  double ref = -std::numeric_limits<double>::infinity();
  Complex acc{0.0, 0.0};

  void add(double log_abs, double phase) {
    if (log_abs == -std::numeric_limits<double>::infinity()) return;
    if (log_abs > ref) {
      acc *= std::exp(ref - log_abs);
      ref = log_abs;
    }
    acc += std::polar(std::exp(log_abs - ref), phase);
  }
  double log_abs() const {
    return std::abs(acc) == 0.0 ? -std::numeric_limits<double>::infinity() : ref + std::log(std::abs(acc));
  }
  double phase() const { return std::arg(acc); }
};

void require_subset_range(std::size_t r, std::size_t m, std::uint64_t budget) {
  if (m < 1 || m > r) throw ParameterError("discriminant order m must lie in [1, number of roots]");
  if (binomial(r, m) > budget) {
    throw CapacityError("C(" + std::to_string(r) + ", " + std::to_string(m) + ") subsets exceed the budget");
  }
}

}  // namespace

std::vector<EigenCurve> track_curves(const LinePath& path, const TrackingParams& params) {
  if (params.grid_points < 2) throw ParameterError("grid needs at least 2 points");
  if (params.refine_depth < 0) throw ParameterError("refine depth must be >= 0");
  const SpectrumReport start = enumerate_eigenpairs(path.a0(), params.solver);

  // One representative per distinct value: lowest residual, non-degenerate preferred.
  std::vector<EigenPair> seeds;
  for (const auto& value : start.distinct_values) {
    const EigenPair* best = nullptr;
    for (const auto& pair : start.pairs) {
      if (std::abs(pair.lambda - value) > params.solver.dedup_tol * std::max(1.0, std::abs(value))) continue;
      if (best == nullptr || (best->degenerate && !pair.degenerate) ||
          (best->degenerate == pair.degenerate && pair.residual < best->residual)) {
        best = &pair;
      }
    }
    if (best != nullptr) seeds.push_back(*best);
  }

  std::vector<EigenCurve> curves(seeds.size());
  const CurveTracker tracker(path, params);
  parallel_for(seeds.size(), params.solver.threads, [&](std::size_t c) { curves[c] = tracker.track(c, seeds[c]); });
  flag_collisions(curves, params);
  return curves;
}

DerivativeCheck derivative_identity_check(const LinePath& path, double t, const EigenPair& pair, double h) {
  const int k = path.a0().order();
  if (!(h > 0.0) || t - h < -1e-15 || t + h > 1.0 + 1e-15) {
    throw ParameterError("derivative check needs 0 <= t - h and t + h <= 1");
  }
  const Complex normalization = entry_power_sum(pair.v, k);
  if (pair.degenerate || std::abs(normalization) < 1e-8 * std::pow(knorm(pair.v, 2.0), k)) {
    throw DegeneracyError("v^{:k} vanishes; the pair cannot be scaled to v^{:k} = 1");
  }
  // Any k-th root of v^{:k} gives w^{:k} = 1; B : w^{⊗k} does not depend on which.
  const Complex scale = std::pow(normalization, 1.0 / k);
  CVector w(pair.v);
  for (auto& z : w) z /= scale;

  DerivativeCheck out;
  out.analytic = form_value(path.b(), w);
  const double magnitude = 1.0 + std::abs(pair.lambda);
  Complex ends[2];
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    const Complex predicted = pair.lambda + sign * h * out.analytic;
    const auto a = path.at(t + sign * h);
    std::optional<EigenPair> moved;
    for (double tol : {1e-12, 1e-10}) {
      moved = correct_eigenpair(a, pair.v, predicted, {30, tol * magnitude, 1e-8});
      if (moved) break;
    }
    if (!moved || std::abs(moved->lambda - predicted) > 0.1 * magnitude) {
      throw SingularityError("continuation to t = " + std::to_string(t + sign * h) + " failed");
    }
    ends[side] = moved->lambda;
  }
  out.numeric = (ends[0] - ends[1]) / (2.0 * h);
  out.gap = std::abs(out.analytic - out.numeric);
  return out;
}

SigmaNormEstimate sigma_norm_estimate(const SymmetricHypermatrix& b, std::size_t num_starts, SigmaDomain domain,
                                      std::uint64_t seed) {
  const int n = b.dim();
  const bool real = domain == SigmaDomain::kRealSphere;
  SigmaNormEstimate out;
  out.domain = domain;
  out.domain_label = std::string(real ? "real" : "complex") + " unit 2-sphere; objective |B : v^{(x)k}|";

  std::vector<CVector> starts;
  starts.emplace_back(static_cast<std::size_t>(n), Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  for (int j = 0; j < n; ++j) {
    CVector e(static_cast<std::size_t>(n));
    e[j] = 1.0;
    starts.push_back(std::move(e));
  }
  for (std::size_t s = 0; starts.size() < num_starts; ++s) {
    RandomStream rng(seed, Stream::kProbe, s);
    CVector v(static_cast<std::size_t>(n));
    for (auto& z : v) z = real ? Complex(rng.normal(), 0.0) : rng.complex_normal();
    if (knorm(v, 2.0) > 0.0) starts.push_back(normalized(v));
  }
  out.starts_used = starts.size();

  auto objective = [&](const CVector& v) { return std::abs(form_value(b, v)); };
  double best = -1.0;
  for (auto v : starts) {
    double f = objective(v);
    double eta = 1.0;
    for (int iter = 0; iter < 2000; ++iter) {
      const Complex g = form_value(b, v);
      const CVector u = contract_to_vector(b, v);
      // Ascent direction of |B : v^{⊗k}|^2: g conj(B : v^{⊗(k-1)}).
      CVector d(u.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = g * std::conj(u[i]);
        if (real) d[i] = Complex(d[i].real(), 0.0);
      }
      const double dn = knorm(d, 2.0);
      if (dn == 0.0) break;
      eta = std::min(1.0, 2.0 * eta);
      bool improved = false;
      double f_new = f;
      for (; eta > 1e-14; eta *= 0.5) {
        CVector trial(v);
        for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += (eta / dn) * d[i];
        trial = normalized(trial);
        f_new = objective(trial);
        if (f_new > f) {
          v = std::move(trial);
          improved = true;
          break;
        }
      }
      if (!improved) break;
      const double gain = f_new - f;
      f = f_new;
      if (gain <= 1e-15 * f) break;
    }
    if (f > best) {
      best = f;
      out.argmax = v;
    }
  }
  out.value = objective(out.argmax);
  return out;
}

WeylGapResult weyl_gap_experiment(const SymmetricHypermatrix& a0, const SymmetricHypermatrix& a1,
                                  const TrackingParams& params, std::size_t sigma_starts) {
  const LinePath path = LinePath::between(a0, a1);
  const auto curves = track_curves(path, params);
  WeylGapResult out;
  out.curves_total = curves.size();
  std::string broken;
  for (const auto& c : curves) {
    for (double t : c.singular_points) out.singular_points.push_back(t);
    if (c.broken || c.samples.back().t != 1.0) {
      broken += " curve " + std::to_string(c.id) + " broke at t=" + std::to_string(c.broken_at) + ";";
      continue;
    }
    ++out.curves_completed;
    out.max_matched_gap = std::max(out.max_matched_gap, std::abs(c.samples.back().lambda - c.samples.front().lambda));
  }
  if (out.curves_completed == 0) {
    throw ExperimentError("no eigenvalue curve reached t = 1 (" + std::to_string(curves.size()) + " curves:" +
                          broken + ")");
  }
  std::sort(out.singular_points.begin(), out.singular_points.end());
  out.singular_points.erase(std::unique(out.singular_points.begin(), out.singular_points.end()),
                            out.singular_points.end());
  const auto norm = sigma_norm_estimate(path.b(), sigma_starts, SigmaDomain::kComplexSphere, params.solver.seed);
  out.norm_estimate = norm.value;
  out.domain_label = norm.domain_label;
  if (out.norm_estimate > 0.0) {
    out.ratio = out.max_matched_gap / out.norm_estimate;
  } else {
    out.ratio = out.max_matched_gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return out;
}

Complex generalized_discriminant(std::span<const Complex> roots, std::size_t m, std::uint64_t subset_budget) {
  const std::size_t r = roots.size();
  require_subset_range(r, m, subset_budget);
  std::vector<int> subset(m);
  std::iota(subset.begin(), subset.end(), 0);
  Complex total{0.0, 0.0};
  do {
    Complex term{1.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        const Complex d = roots[subset[i]] - roots[subset[j]];
        term *= d * d;
      }
    }
    total += term;
  } while (next_colex_combination(subset, static_cast<int>(r)));
  return total;
}

DiscriminantProfile distinct_root_count(std::span<const Complex> roots, double merge_tol, double zero_tol,
                                        std::uint64_t subset_budget) {
  if (roots.empty()) throw ParameterError("distinct root count needs at least one root");
  DiscriminantProfile out;
  out.roots = distinct_eigenvalues(roots, merge_tol);
  const std::size_t r = out.roots.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m <= r; ++m) {
    if (binomial(r, m) > subset_budget) {
      out.delta.emplace_back(nan, nan);
      out.log_abs.push_back(nan);
      out.evaluated.push_back(false);
      continue;
    }
    std::vector<int> subset(m);
    std::iota(subset.begin(), subset.end(), 0);
    LogSum sum;
    do {
      double log_abs = 0.0;
      double phase = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
          // Ordered pairs (i, j) and (j, i) together contribute (λ_i - λ_j)^4.
          const Complex d = out.roots[subset[i]] - out.roots[subset[j]];
          log_abs += 4.0 * std::log(std::abs(d));
          phase += 4.0 * std::arg(d);
        }
      }
      sum.add(log_abs, phase);
    } while (next_colex_combination(subset, static_cast<int>(r)));
    const double la = sum.log_abs();
    out.log_abs.push_back(la);
    out.delta.push_back(std::isfinite(la) ? std::polar(std::exp(la), sum.phase()) : Complex(0.0, 0.0));
    out.evaluated.push_back(true);
    max_log = std::max(max_log, la);
  }
  const double threshold = max_log + std::log(zero_tol);
  for (std::size_t m = r; m >= 1; --m) {
    if (out.evaluated[m - 1] && out.log_abs[m - 1] > threshold) {
      out.distinct_count = m;
      break;
    }
  }
  return out;
}

}  // namespace hypereig
