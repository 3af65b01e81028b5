#include "hypereig/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "hypereig/bounds.hpp"
#include "hypereig/error.hpp"
#include "hypereig/hypergraph.hpp"
#include "hypereig/parallel.hpp"

namespace hypereig {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1)");
}

void require_unit(std::span<const Complex> v) {
  if (std::abs(knorm(v, 2.0) - 1.0) > 1e-10) throw PreconditionError("v must have unit 2-norm");
}

struct LineFit {
  double slope = kNaN;
  double intercept = kNaN;
  double r2 = kNaN;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  if (x.size() < 2) return {};
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return {};
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : kNaN);
  return fit;
}

int net_grid_radius(double delta) { return static_cast<int>(std::floor(1.0 / delta)); }

std::uint64_t checked_grid_size(int radius, int n, std::uint64_t capacity) {
  const auto side = static_cast<std::uint64_t>(2 * radius + 1);
  std::uint64_t total = 1;
  for (int d = 0; d < 2 * n; ++d) {
    if (total > capacity / side) {
      throw CapacityError("net grid needs " + std::to_string(side) + "^" + std::to_string(2 * n) +
                          " points, above the capacity " + std::to_string(capacity));
    }
    total *= side;
  }
  if (total > capacity) {
    throw CapacityError("net grid needs " + std::to_string(total) + " points, above the capacity " +
                        std::to_string(capacity));
  }
  return total;
}

// Bucket grid over the 2n real coordinates of unit vectors, cell side δ.
class NetIndex {
 public:
  explicit NetIndex(const NetSpec& net) : net_(net), dims_(2 * net.n) {
    cells_ = static_cast<int>(std::ceil(2.0 / net.delta)) + 1;
    bits_ = 1;
    while ((1 << bits_) < cells_) ++bits_;
    if (bits_ * dims_ > 64) throw CapacityError("net index key does not fit in 64 bits");
    std::vector<int> cell(static_cast<std::size_t>(dims_));
    for (std::size_t i = 0; i < net.size(); ++i) {
      cell_of(net.point(i), cell);
      buckets_[key(cell)].push_back(static_cast<std::uint32_t>(i));
    }
  }

  double nearest_gap(std::span<const Complex> probe) const {
    std::vector<int> centre(static_cast<std::size_t>(dims_));
    cell_of(probe, centre);
    std::vector<int> offset(static_cast<std::size_t>(dims_));
    std::vector<int> cell(static_cast<std::size_t>(dims_));
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cells_; ++r) {
      // Visit the shell of cells at Chebyshev distance exactly r.
      std::fill(offset.begin(), offset.end(), -r);
      while (true) {
        bool on_shell = false;
        bool inside = true;
        for (int d = 0; d < dims_; ++d) {
          on_shell = on_shell || std::abs(offset[d]) == r;
          cell[d] = centre[d] + offset[d];
          inside = inside && cell[d] >= 0 && cell[d] < cells_;
        }
        if (on_shell && inside) {
          if (const auto it = buckets_.find(key(cell)); it != buckets_.end()) {
            for (std::uint32_t i : it->second) best = std::min(best, coordinate_gap(probe, net_.point(i)));
          }
        }
        int d = 0;
        while (d < dims_ && offset[d] == r) offset[d++] = -r;
        if (d == dims_) break;
        ++offset[d];
      }
      // Unvisited points lie at least r full cells away.
      if (best <= r * net_.delta) break;
    }
    return best;
  }

 private:
  void cell_of(std::span<const Complex> v, std::vector<int>& cell) const {
    for (int j = 0; j < net_.n; ++j) {
      cell[2 * j] = clamp_cell(v[j].real());
      cell[2 * j + 1] = clamp_cell(v[j].imag());
    }
  }
  int clamp_cell(double x) const {
    return std::clamp(static_cast<int>(std::floor((x + 1.0) / net_.delta)), 0, cells_ - 1);
  }
  std::uint64_t key(const std::vector<int>& cell) const {
    std::uint64_t out = 0;
    for (int c : cell) out = (out << bits_) | static_cast<std::uint64_t>(c);
    return out;
  }

  const NetSpec& net_;
  int dims_;
  int cells_ = 0;
  int bits_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

std::vector<CVector> draw_probes(int n, std::size_t samples, std::uint64_t seed) {
  std::vector<CVector> probes;
  probes.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) probes.push_back(random_unit_vector(n, seed, Stream::kProbe, i));
  return probes;
}

NetCoverResult summarize_cover(double delta, const std::vector<double>& gaps) {
  NetCoverResult out;
  out.delta = delta;
  out.samples = gaps.size();
  out.max_coord_gap = gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
  out.pass = out.max_coord_gap <= delta + 1e-12;
  return out;
}

}  // namespace

std::string tail_kind_name(TailKind kind) { return kind == TailKind::kUpper ? "upper" : "gap"; }

TailKind parse_tail_kind(const std::string& name) {
  if (name == "upper") return TailKind::kUpper;
  if (name == "gap") return TailKind::kGap;
  throw ParameterError("tail kind must be upper or gap, got '" + name + "'");
}

std::vector<double> default_tail_thresholds(std::span<const double> norms, std::size_t count) {
  if (count < 2) throw ParameterError("need at least two thresholds");
  const double top = norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    out[j] = top * std::sqrt(static_cast<double>(j) / static_cast<double>(count - 1));
  }
  return out;
}

TailEstimate tail_estimate(TailKind kind, int n, int k, double p, std::span<const Complex> v, std::size_t trials,
                           std::span<const double> thresholds, std::uint64_t seed, unsigned threads) {
  require_probability(p);
  if (k < 2 || n < k) throw ParameterError("tail estimate needs n >= k >= 2");
  if (v.size() != static_cast<std::size_t>(n)) throw ShapeError("vector length != dimension");
  require_unit(v);
  if (trials < 100) throw ParameterError("tail estimate needs at least 100 trials");
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    if (!std::isfinite(thresholds[j]) || (j > 0 && thresholds[j] < thresholds[j - 1])) {
      throw ParameterError("thresholds must be finite and ascending");
    }
  }

  TailEstimate out;
  out.kind = kind;
  out.n = n;
  out.k = k;
  out.p = p;
  out.trials = trials;
  out.seed = seed;
  out.norms.assign(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, Stream::kTrial, i);
    if (kind == TailKind::kUpper) {
      const auto y = apply_vector_power(upper_ensemble(n, k, p, s), v, k - 1);
      out.norms[i] = knorm(y.data(), 2.0);
    } else {
      out.norms[i] = knorm(contract_to_vector(random_gap(n, k, p, s), v), 2.0);
    }
  });

  out.thresholds = thresholds.empty() ? default_tail_thresholds(out.norms)
                                      : std::vector<double>(thresholds.begin(), thresholds.end());
  std::vector<double> sorted = out.norms;
  std::sort(sorted.begin(), sorted.end());
  const auto total = static_cast<double>(trials);
  out.survival.reserve(out.thresholds.size());
  for (double t : out.thresholds) {
    const auto above = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t);
    out.survival.push_back(static_cast<double>(above) / total);
  }

  std::vector<double> x, y;
  for (std::size_t j = 0; j < out.thresholds.size(); ++j) {
    if (out.survival[j] >= 10.0 / total) {
      x.push_back(out.thresholds[j] * out.thresholds[j]);
      y.push_back(std::log(out.survival[j]));
    }
  }
  const LineFit fit = least_squares(x, y);
  out.fit_points = x.size();
  out.fit_c = -fit.slope;
  out.fit_C = std::exp(fit.intercept);
  out.fit_r2 = fit.r2;
  return out;
}

double net_delta(int n, int k) {
  if (n < 1 || k < 2) throw ParameterError("net needs n >= 1 and k >= 2");
  return 1.0 / (4.0 * k * std::sqrt(static_cast<double>(n)));
}

NetSpec build_net(int n, int k, std::uint64_t capacity) {
  NetSpec net;
  net.n = n;
  net.k = k;
  net.delta = net_delta(n, k);
  net.grid_radius = net_grid_radius(net.delta);
  net.grid_size = checked_grid_size(net.grid_radius, n, capacity);
  net.size_bound = std::pow(5.0 * net.delta, -2.0 * n);
  net.reference_bound = std::pow(5.0 / net.delta, 2.0 * n);

  // s holds (Re s_1, Im s_1, ..., Re s_n, Im s_n); primitive vectors are the
  // unique representatives of each ray through the grid.
  const int m = net.grid_radius;
  const auto dims = static_cast<std::size_t>(2 * n);
  std::vector<int> s(dims, -m);
  while (true) {
    int g = 0;
    for (int c : s) g = std::gcd(g, c);
    if (g == 1) {
      double norm2 = 0.0;
      for (int c : s) norm2 += static_cast<double>(c) * c;
      const double inv = 1.0 / std::sqrt(norm2);
      for (int j = 0; j < n; ++j) {
        net.points.emplace_back(s[2 * j] * inv, s[2 * j + 1] * inv);
      }
    }
    std::size_t d = 0;
    while (d < dims && s[d] == m) s[d++] = -m;
    if (d == dims) break;
    ++s[d];
  }
  net.within_size_bound = static_cast<double>(net.size()) <= net.size_bound;
  return net;
}

double coordinate_gap(std::span<const Complex> v, std::span<const Complex> w) {
  if (v.size() != w.size()) throw ShapeError("vector lengths differ");
  double gap = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Complex d = v[j] - w[j];
    gap = std::max({gap, std::abs(d.real()), std::abs(d.imag())});
  }
  return gap;
}

std::vector<double> nearest_net_gaps(const NetSpec& net, std::span<const CVector> probes) {
  if (net.size() == 0) throw PreconditionError("net is empty");
  const NetIndex index(net);
  std::vector<double> gaps;
  gaps.reserve(probes.size());
  for (const auto& probe : probes) {
    if (probe.size() != static_cast<std::size_t>(net.n)) throw ShapeError("probe length != net dimension");
    gaps.push_back(index.nearest_gap(probe));
  }
  return gaps;
}

NetCoverResult net_cover_check(const NetSpec& net, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("need at least one probe");
  if (net.size() == 0) throw PreconditionError("net is empty");
  return summarize_cover(net.delta, nearest_net_gaps(net, draw_probes(net.n, samples, seed)));
}

NetCoverResult implicit_net_cover_check(int n, int k, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("need at least one probe");
  const double delta = net_delta(n, k);
  const int m = net_grid_radius(delta);
  std::vector<double> gaps;
  gaps.reserve(samples);
  CVector w(static_cast<std::size_t>(n));
  for (const auto& probe : draw_probes(n, samples, seed)) {
    auto round = [&](double x) { return std::clamp(std::round(x / delta), -static_cast<double>(m), static_cast<double>(m)); };
    for (int j = 0; j < n; ++j) w[j] = Complex(round(probe[j].real()), round(probe[j].imag()));
    gaps.push_back(coordinate_gap(probe, normalized(w)));
  }
  return summarize_cover(delta, gaps);
}

CVector random_unit_vector(int n, std::uint64_t seed, Stream stream, std::uint64_t index) {
  if (n < 1) throw ParameterError("dimension must be >= 1");
  RandomStream rng(seed, stream, index);
  CVector v(static_cast<std::size_t>(n));
  do {
    for (auto& x : v) x = rng.complex_normal();
  } while (knorm(v, 2.0) == 0.0);
  return normalized(v);
}

std::vector<RadiusStudyRow> radius_scaling_study(int k, std::span<const int> n_list, double p, std::size_t trials,
                                                 double b_const, std::uint64_t seed, const SolverParams& solver) {
  require_probability(p);
  if (trials == 0) throw ParameterError("radius study needs at least one trial");
  if (n_list.empty()) throw ParameterError("radius study needs at least one n");
  if (!(b_const > 0.0) || !std::isfinite(b_const)) throw ParameterError("B must be positive and finite");
  for (int n : n_list) {
    if (n < 2 || k < 2) throw ParameterError("radius study needs n >= 2 and k >= 2");
    const auto expected = expected_eigenvalue_count(n, k);
    if (expected > kEnumerationCapacity) {
      throw CapacityError("n(k-1)^(n-1) = " + std::to_string(expected) + " at n=" + std::to_string(n) +
                          " exceeds the enumeration capacity " + std::to_string(kEnumerationCapacity));
    }
  }

  std::vector<RadiusStudyRow> rows;
  for (int n : n_list) {
    struct Slot {
      bool ok = false;
      double radius = 0.0;
      std::size_t found = 0;
      double max_residual = 0.0;
      bool incomplete = false;
    };
    std::vector<Slot> slots(trials);
    const std::uint64_t n_seed = derive_seed(seed, Stream::kTrial, static_cast<std::uint64_t>(n));
    parallel_for(trials, solver.threads, [&](std::size_t i) {
      const std::uint64_t trial_seed = derive_seed(n_seed, Stream::kTrial, i);
      SolverParams local = solver;
      local.threads = 1;
      local.seed = derive_seed(trial_seed, Stream::kStart, 0);
      const auto d = random_gap(n, k, p, trial_seed);
      try {
        const auto report = enumerate_eigenpairs(d, local);
        Slot& slot = slots[i];
        slot.ok = true;
        slot.radius = spectral_radius(report);
        slot.found = report.found_count;
        slot.incomplete = report.possibly_incomplete();
        for (const auto& pair : report.pairs) slot.max_residual = std::max(slot.max_residual, pair.residual);
      } catch (const SolverError&) {
        slots[i].ok = false;
      }
    });

    RadiusStudyRow row;
    row.n = n;
    row.k = k;
    row.p = p;
    row.expected_count = expected_eigenvalue_count(n, k);
    row.bound_value = b_const * std::pow(static_cast<double>(n), (k - 1) / 2.0) * std::sqrt(std::log(static_cast<double>(n)));
    for (const auto& slot : slots) {
      if (!slot.ok) {
        ++row.solver_failures;
        continue;
      }
      row.radius_samples.push_back(slot.radius);
      row.found_counts.push_back(slot.found);
      row.max_residuals.push_back(slot.max_residual);
      if (slot.incomplete) ++row.incomplete;
    }
    row.trials = row.radius_samples.size();
    if (row.trials > 0) {
      row.ratio_stats.min = std::numeric_limits<double>::infinity();
      row.ratio_stats.max = 0.0;
      double sum = 0.0;
      for (double r : row.radius_samples) {
        const double ratio = r / row.bound_value;
        row.ratio_stats.min = std::min(row.ratio_stats.min, ratio);
        row.ratio_stats.max = std::max(row.ratio_stats.max, ratio);
        sum += ratio;
      }
      row.ratio_stats.mean = sum / static_cast<double>(row.trials);
    } else {
      row.ratio_stats = {kNaN, kNaN, kNaN};
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

HolderSweep holder_sweep(int n, int k, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("holder sweep needs at least one sample");
  if (n < 1 || k < 2) throw ParameterError("holder sweep needs n >= 1 and k >= 2");
  HolderSweep out;
  out.samples = samples;
  out.min_ratio = std::numeric_limits<double>::infinity();
  const CVector uniform(static_cast<std::size_t>(n), Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  for (std::size_t i = 0; i < samples; ++i) {
    const CVector v = i == 0 ? uniform : random_unit_vector(n, seed, Stream::kVector, i);
    const HolderCheck check = hadamard_power_lower_bound(v, k);
    if (!check.holds()) ++out.violations;
    out.min_ratio = std::min(out.min_ratio, check.lhs / check.bound);
    if (i == 0) out.uniform_gap = std::abs(check.lhs - check.bound);
  }
  return out;
}

}  // namespace hypereig
