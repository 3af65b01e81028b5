#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/core.h>

#include "hypereig/bounds.hpp"
#include "hypereig/cli.hpp"
#include "hypereig/combinatorics.hpp"
#include "hypereig/eigensolver.hpp"
#include "hypereig/error.hpp"
#include "hypereig/experiments.hpp"
#include "hypereig/hypergraph.hpp"
#include "hypereig/path.hpp"

namespace hypereig::cli {

namespace {

using nlohmann::json;

std::string num(double x) { return fmt::format("{:.17g}", x); }

// JSON cannot hold NaN or infinity; they become null.
json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    line += fields[i];
  }
  return line + '\n';
}

struct Common {
  std::string format = "csv";
  std::string out;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

struct Outcome {
  std::string csv;
  json doc;
  std::string summary;
  std::vector<std::string> inputs;  // files read, never written
};

struct Command {
  CLI::App* app = nullptr;
  bool seeded = false;
  std::function<Outcome()> run;
};

void add_common(CLI::App* sub, Common& common, bool seeded) {
  sub->add_option("--format", common.format, "Data format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", common.out, "Data file (default: standard output)");
  sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  if (seeded) sub->add_option("--seed", common.seed, "Random seed");
}

json option_params(const CLI::App* sub) {
  json params = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
    std::string name = opt->get_name();
    name.erase(0, name.find_first_not_of('-'));
    const auto& results = opt->results();
    if (!results.empty()) {
      params[name] = results.size() == 1 ? json(results.front()) : json(results);
    } else if (opt->get_expected_max() == 0) {
      params[name] = false;
    } else {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

bool same_file(const std::string& a, const std::string& b) {
  std::error_code ec;
  return std::filesystem::exists(a, ec) && std::filesystem::exists(b, ec) && std::filesystem::equivalent(a, b, ec);
}

// ---------------------------------------------------------------------------
// bounds

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  std::string str() const { return den == 1 ? std::to_string(num) : fmt::format("{}/{}", num, den); }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Fraction reduced(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t g = std::gcd(a, b);
  return {a / g, b / g};
}

bool less_equal(const Fraction& a, const Fraction& b) {
  return static_cast<unsigned __int128>(a.num) * b.den <= static_cast<unsigned __int128>(b.num) * a.den;
}

std::uint64_t checked_power(std::uint64_t base, int e) {
  std::uint64_t out = 1;
  for (int i = 0; i < e; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) throw CapacityError("bound numerator overflows 64 bits");
    out *= base;
  }
  return out;
}

Outcome run_bounds(int n, int k) {
  if (k < 2 || n <= k) throw ParameterError("bounds needs n > k >= 2");
  const auto kf1 = factorial(static_cast<unsigned>(k - 1));
  const auto kf2 = factorial(static_cast<unsigned>(k - 2));
  const Fraction exact_row = reduced(anchored_repeat_count(n, k), kf1);
  const Fraction literal_row = reduced(repeated_tuple_count(n, k), kf1);
  const Fraction bound = reduced(checked_power(static_cast<std::uint64_t>(n - 1), k - 2), kf2);
  const RowSumBounds rows = row_sums(complete_gap(n, k));
  const bool holds = less_equal(exact_row, bound);
  const std::string verdict = holds ? "bound holds" : "bound violated";
  const std::string squeeze = rows.min == rows.max ? "tight" : "bracket";

  Outcome o;
  o.csv = csv_row({"n", "k", "bound", "bound_exact", "max_row_sum", "max_row_sum_exact", "min_row_sum",
                   "literal_row_sum", "literal_row_sum_exact", "rho_lower", "rho_upper", "verdict"});
  o.csv += csv_row({std::to_string(n), std::to_string(k), num(bound.value()), bound.str(), num(rows.max),
                    exact_row.str(), num(rows.min), num(literal_row.value()), literal_row.str(), num(rows.min),
                    num(rows.max), verdict});
  o.doc = {{"n", n},
           {"k", k},
           {"bound", bound.value()},
           {"bound_exact", bound.str()},
           {"max_row_sum", rows.max},
           {"max_row_sum_exact", exact_row.str()},
           {"min_row_sum", rows.min},
           {"literal_row_sum", literal_row.value()},
           {"literal_row_sum_exact", literal_row.str()},
           {"rho_bracket", {rows.min, rows.max}},
           {"squeeze", squeeze},
           {"verdict", verdict}};
  o.summary = fmt::format(
      "B({n},{k}): bound (n-1)^(k-2)/(k-2)! = {b}\n"
      "exact max row sum = {r} ({rv:.6g}); row sums {sq}, so {lo:.6g} <= rho <= {hi:.6g}\n"
      "row sum from the (n-1)-vertex count alone = {l}\n"
      "verdict: {v}\n",
      fmt::arg("n", n), fmt::arg("k", k), fmt::arg("b", bound.str()), fmt::arg("r", exact_row.str()),
      fmt::arg("rv", exact_row.value()), fmt::arg("sq", rows.min == rows.max ? "are all equal" : "differ"),
      fmt::arg("lo", rows.min), fmt::arg("hi", rows.max), fmt::arg("l", literal_row.str()), fmt::arg("v", verdict));
  return o;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumOptions {
  std::string input;
  std::string ensemble;
  int n = 0;
  int k = 0;
  std::size_t starts = 0;
  double tol = 1e-10;
  double dedup_tol = 1e-6;
};

SymmetricHypermatrix load_matrix(const std::string& spec, int n, int k, std::uint64_t seed, Outcome& o) {
  const EnsembleChoice choice = parse_ensemble(spec);
  if (choice.keyword == EnsembleKeyword::kFile) o.inputs.push_back(choice.path);
  return build_ensemble(choice, n, k, seed);
}

Outcome run_spectrum(const SpectrumOptions& opt, const Common& common) {
  if (opt.input.empty() == opt.ensemble.empty()) throw ParameterError("give exactly one of --input or --ensemble");
  Outcome o;
  const std::string spec = opt.input.empty() ? opt.ensemble : "file:" + opt.input;
  const auto a = load_matrix(spec, opt.n, opt.k, common.seed, o);
  SolverParams params;
  params.num_starts = opt.starts;
  params.newton_tol = opt.tol;
  params.dedup_tol = opt.dedup_tol;
  params.seed = common.seed;
  params.threads = common.threads;
  const auto report = enumerate_eigenpairs(a, params);

  o.csv = csv_row({"lambda_re", "lambda_im", "residual", "degenerate"});
  json pairs = json::array();
  for (const auto& p : report.pairs) {
    o.csv += csv_row({num(p.lambda.real()), num(p.lambda.imag()), num(p.residual), p.degenerate ? "1" : "0"});
    pairs.push_back({{"lambda_re", p.lambda.real()},
                     {"lambda_im", p.lambda.imag()},
                     {"residual", p.residual},
                     {"degenerate", p.degenerate}});
  }
  json distinct = json::array();
  for (Complex z : report.distinct_values) distinct.push_back({z.real(), z.imag()});
  o.doc = {{"order", a.order()},
           {"dim", a.dim()},
           {"expected_count", report.expected_count},
           {"found_count", report.found_count},
           {"radius", report.radius},
           {"possibly_incomplete", report.possibly_incomplete()},
           {"starts_used", report.starts_used},
           {"converged_starts", report.converged_starts},
           {"distinct_values", distinct},
           {"pairs", pairs}};
  std::string values;
  for (Complex z : report.distinct_values) values += fmt::format("  {:.10g} {:+.10g}i\n", z.real() + 0.0, z.imag() + 0.0);
  o.summary = fmt::format("order {} dim {}: {} distinct eigenvalue(s), expected_count {} (with multiplicity)\n{}"
                          "radius {:.10g}{}\n",
                          a.order(), a.dim(), report.found_count, report.expected_count, values, report.radius,
                          report.possibly_incomplete() ? " (lower bound: fewer values than the degree)" : "");
  return o;
}

// ---------------------------------------------------------------------------
// path and weyl

struct PathOptions {
  std::string a0;
  std::string a1;
  int n = 0;
  int k = 0;
  int grid = 21;
  int refine_depth = 20;
  std::size_t starts = 0;
  std::size_t sigma_starts = 64;
};

LinePath load_path(const PathOptions& opt, const Common& common, Outcome& o) {
  const auto a0 = load_matrix(opt.a0, opt.n, opt.k, derive_seed(common.seed, Stream::kTrial, 0), o);
  const auto a1 = load_matrix(opt.a1, opt.n, opt.k, derive_seed(common.seed, Stream::kTrial, 1), o);
  if (a0.order() != a1.order() || a0.dim() != a1.dim()) throw ShapeError("--a0 and --a1 differ in shape");
  return LinePath::between(a0, a1);
}

TrackingParams tracking_params(const PathOptions& opt, const Common& common) {
  TrackingParams params;
  params.grid_points = opt.grid;
  params.refine_depth = opt.refine_depth;
  params.solver.num_starts = opt.starts;
  params.solver.seed = common.seed;
  params.solver.threads = common.threads;
  return params;
}

Outcome run_path(const PathOptions& opt, const Common& common) {
  Outcome o;
  const LinePath path = load_path(opt, common, o);
  const auto curves = track_curves(path, tracking_params(opt, common));
  o.csv = csv_row({"curve_id", "t", "lambda_re", "lambda_im", "residual", "singular_flag"});
  json jcurves = json::array();
  std::size_t matched = 0;
  std::size_t singular = 0;
  for (const auto& c : curves) {
    json samples = json::array();
    for (const auto& s : c.samples) {
      o.csv += csv_row({std::to_string(c.id), num(s.t), num(s.lambda.real()), num(s.lambda.imag()), num(s.residual),
                        s.singular ? "1" : "0"});
      samples.push_back({{"t", s.t},
                         {"lambda_re", s.lambda.real()},
                         {"lambda_im", s.lambda.imag()},
                         {"residual", s.residual},
                         {"singular", s.singular},
                         {"degenerate", s.degenerate}});
    }
    if (c.matched) ++matched;
    singular += c.singular_points.size();
    jcurves.push_back({{"id", c.id},
                       {"matched", c.matched},
                       {"broken", c.broken},
                       {"broken_at", jnum(c.broken_at)},
                       {"variation", c.variation()},
                       {"singular_points", c.singular_points},
                       {"samples", samples}});
  }
  o.doc = {{"curves", jcurves}};
  o.summary = fmt::format("{} curve(s), {} reached t = 1, {} singular point(s) recorded\n", curves.size(), matched,
                          singular);
  return o;
}

Outcome run_weyl(const PathOptions& opt, const Common& common) {
  Outcome o;
  const LinePath path = load_path(opt, common, o);
  const auto r = weyl_gap_experiment(path.a0(), path.a0() + path.b(), tracking_params(opt, common), opt.sigma_starts);
  o.csv = csv_row({"max_matched_gap", "norm_estimate", "ratio", "curves_total", "curves_completed",
                   "singular_points", "domain"});
  o.csv += csv_row({num(r.max_matched_gap), num(r.norm_estimate), num(r.ratio), std::to_string(r.curves_total),
                    std::to_string(r.curves_completed), std::to_string(r.singular_points.size()),
                    "\"" + r.domain_label + "\""});
  o.doc = {{"max_matched_gap", r.max_matched_gap},
           {"norm_estimate", r.norm_estimate},
           {"ratio", jnum(r.ratio)},
           {"curves_total", r.curves_total},
           {"curves_completed", r.curves_completed},
           {"singular_points", r.singular_points},
           {"domain", r.domain_label}};
  o.summary = fmt::format("max matched gap {:.10g}, sigma-norm estimate {:.10g}, ratio {:.6g}{}\n"
                          "{} of {} curves completed; norm domain: {}\n",
                          r.max_matched_gap, r.norm_estimate, r.ratio,
                          r.ratio > 1.0 ? " (above 1: the estimate is only a lower bound on the norm)" : "",
                          r.curves_completed, r.curves_total, r.domain_label);
  return o;
}

// ---------------------------------------------------------------------------
// Monte Carlo subcommands

struct TailOptions {
  std::string kind = "upper";
  int n = 0;
  int k = 0;
  double p = 0.5;
  std::size_t trials = 1000;
  std::size_t thresholds = 41;
  std::string vector = "uniform";
};

Outcome run_tail(const TailOptions& opt, const Common& common) {
  const TailKind kind = parse_tail_kind(opt.kind);
  if (opt.n < 1) throw ParameterError("--n must be >= 1");
  const CVector v = opt.vector == "uniform"
                        ? CVector(static_cast<std::size_t>(opt.n), Complex(1.0 / std::sqrt(static_cast<double>(opt.n)), 0.0))
                        : random_unit_vector(opt.n, common.seed, Stream::kVector, 0);
  // Two passes would double the cost; the default grid is derived from the
  // norms, so sample once with no thresholds and regrid when asked.
  auto est = tail_estimate(kind, opt.n, opt.k, opt.p, v, opt.trials, {}, common.seed, common.threads);
  if (opt.thresholds != est.thresholds.size()) {
    const auto grid = default_tail_thresholds(est.norms, opt.thresholds);
    est = tail_estimate(kind, opt.n, opt.k, opt.p, v, opt.trials, grid, common.seed, common.threads);
  }
  Outcome o;
  o.csv = csv_row({"t", "survival", "fit"});
  for (std::size_t j = 0; j < est.thresholds.size(); ++j) {
    const double t = est.thresholds[j];
    o.csv += csv_row({num(t), num(est.survival[j]), num(est.fit_C * std::exp(-est.fit_c * t * t))});
  }
  o.doc = {{"kind", tail_kind_name(kind)},
           {"n", opt.n},
           {"k", opt.k},
           {"p", opt.p},
           {"trials", est.trials},
           {"seed", est.seed},
           {"vector", opt.vector},
           {"fit_c", jnum(est.fit_c)},
           {"fit_C", jnum(est.fit_C)},
           {"fit_r2", jnum(est.fit_r2)},
           {"fit_points", est.fit_points},
           {"thresholds", est.thresholds},
           {"survival", est.survival}};
  o.summary = fmt::format("{} tail, n={} k={} p={} trials={}: log survival ~ log C - c t^2 with c={:.6g}, C={:.6g}, "
                          "R^2={:.4f} over {} thresholds\n",
                          tail_kind_name(kind), opt.n, opt.k, opt.p, est.trials, est.fit_c, est.fit_C, est.fit_r2,
                          est.fit_points);
  return o;
}

struct NetOptions {
  int n = 2;
  int k = 3;
  std::size_t samples = 1000;
  bool implicit = false;
};

Outcome run_net_check(const NetOptions& opt, const Common& common) {
  Outcome o;
  NetCoverResult cover;
  std::string size = "", bound = "", within = "", reference = "";
  if (opt.implicit) {
    cover = implicit_net_cover_check(opt.n, opt.k, opt.samples, common.seed);
    bound = num(std::pow(5.0 * cover.delta, -2.0 * opt.n));
    reference = num(std::pow(5.0 / cover.delta, 2.0 * opt.n));
  } else {
    const NetSpec net = build_net(opt.n, opt.k);
    cover = net_cover_check(net, opt.samples, common.seed);
    size = std::to_string(net.size());
    bound = num(net.size_bound);
    within = net.within_size_bound ? "1" : "0";
    reference = num(net.reference_bound);
  }
  o.csv = csv_row({"n", "k", "method", "delta", "net_size", "size_bound", "within_size_bound", "reference_bound",
                   "samples", "max_coord_gap", "pass"});
  o.csv += csv_row({std::to_string(opt.n), std::to_string(opt.k), opt.implicit ? "implicit" : "explicit",
                    num(cover.delta), size, bound, within, reference, std::to_string(cover.samples),
                    num(cover.max_coord_gap), cover.pass ? "1" : "0"});
  o.doc = {{"n", opt.n},
           {"k", opt.k},
           {"method", opt.implicit ? "implicit" : "explicit"},
           {"delta", cover.delta},
           {"size_bound", std::stod(bound)},
           {"reference_bound", std::stod(reference)},
           {"samples", cover.samples},
           {"max_coord_gap", cover.max_coord_gap},
           {"pass", cover.pass}};
  if (!opt.implicit) {
    o.doc["net_size"] = std::stoull(size);
    o.doc["within_size_bound"] = within == "1";
  }
  o.summary = fmt::format("delta = {:.6g}; {} probes, worst coordinate gap {:.6g}: {}\n", cover.delta, cover.samples,
                          cover.max_coord_gap, cover.pass ? "covered" : "NOT covered");
  if (!opt.implicit) {
    o.summary += fmt::format("|V'| = {} vs (5 delta)^(-2n) = {:.6g}: {}; (5/delta)^(2n) = {:.6g}\n", size,
                             std::stod(bound), within == "1" ? "within" : "exceeds", std::stod(reference));
  }
  return o;
}

struct RadiusOptions {
  int k = 3;
  std::vector<int> n_list{2, 3, 4};
  double p = 0.5;
  std::size_t trials = 30;
  double b = 10.0;
  std::size_t starts = 0;
};

Outcome run_radius_study(const RadiusOptions& opt, const Common& common) {
  SolverParams solver;
  solver.num_starts = opt.starts;
  solver.threads = common.threads;
  const auto rows = radius_scaling_study(opt.k, opt.n_list, opt.p, opt.trials, opt.b, common.seed, solver);
  Outcome o;
  o.csv = csv_row({"n", "k", "p", "trials", "solver_failures", "incomplete", "expected_count", "max_found",
                   "max_residual", "radius_min", "radius_mean", "radius_max", "bound_value", "ratio_min",
                   "ratio_mean", "ratio_max"});
  json jrows = json::array();
  for (const auto& r : rows) {
    const auto rmin = r.radius_samples.empty() ? NAN : *std::min_element(r.radius_samples.begin(), r.radius_samples.end());
    const auto rmax = r.radius_samples.empty() ? NAN : *std::max_element(r.radius_samples.begin(), r.radius_samples.end());
    const double rmean = r.radius_samples.empty()
                             ? NAN
                             : std::accumulate(r.radius_samples.begin(), r.radius_samples.end(), 0.0) / r.trials;
    const std::size_t max_found = r.found_counts.empty() ? 0 : *std::max_element(r.found_counts.begin(), r.found_counts.end());
    const double max_res = r.max_residuals.empty() ? 0.0 : *std::max_element(r.max_residuals.begin(), r.max_residuals.end());
    o.csv += csv_row({std::to_string(r.n), std::to_string(r.k), num(r.p), std::to_string(r.trials),
                      std::to_string(r.solver_failures), std::to_string(r.incomplete),
                      std::to_string(r.expected_count), std::to_string(max_found), num(max_res), num(rmin), num(rmean),
                      num(rmax), num(r.bound_value), num(r.ratio_stats.min), num(r.ratio_stats.mean),
                      num(r.ratio_stats.max)});
    jrows.push_back({{"n", r.n},
                     {"k", r.k},
                     {"p", r.p},
                     {"trials", r.trials},
                     {"solver_failures", r.solver_failures},
                     {"incomplete", r.incomplete},
                     {"expected_count", r.expected_count},
                     {"radius_samples", r.radius_samples},
                     {"found_counts", r.found_counts},
                     {"max_residuals", r.max_residuals},
                     {"bound_value", r.bound_value},
                     {"ratio_stats", {{"min", jnum(r.ratio_stats.min)}, {"mean", jnum(r.ratio_stats.mean)}, {"max", jnum(r.ratio_stats.max)}}}});
    o.summary += fmt::format("n={}: {} trials, radius/bound in [{:.4g}, {:.4g}] mean {:.4g}; {} failures, {} below "
                             "the degree count\n",
                             r.n, r.trials, r.ratio_stats.min, r.ratio_stats.max, r.ratio_stats.mean,
                             r.solver_failures, r.incomplete);
  }
  o.doc = {{"rows", jrows}, {"B", opt.b}};
  return o;
}

struct HolderOptions {
  int n = 5;
  int k = 3;
  std::size_t samples = 10000;
};

Outcome run_holder(const HolderOptions& opt, const Common& common) {
  const auto r = holder_sweep(opt.n, opt.k, opt.samples, common.seed);
  Outcome o;
  o.csv = csv_row({"n", "k", "samples", "violations", "min_ratio", "uniform_gap"});
  o.csv += csv_row({std::to_string(opt.n), std::to_string(opt.k), std::to_string(r.samples),
                    std::to_string(r.violations), num(r.min_ratio), num(r.uniform_gap)});
  o.doc = {{"n", opt.n},
           {"k", opt.k},
           {"samples", r.samples},
           {"violations", r.violations},
           {"min_ratio", r.min_ratio},
           {"uniform_gap", r.uniform_gap}};
  o.summary = fmt::format("{} violation(s) of |v^(k-1)|_2 >= n^(1-k/2) over {} unit vectors; min ratio {:.12g}, "
                          "uniform-vector gap {:.3g}\n",
                          r.violations, r.samples, r.min_ratio, r.uniform_gap);
  return o;
}

// ---------------------------------------------------------------------------

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const CapacityError*>(&e)) return kExitCapacity;
  if (dynamic_cast<const SolverError*>(&e)) return kExitSolver;
  if (dynamic_cast<const Error*>(&e)) return kExitParameter;
  return kExitSolver;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral experiments on symmetric hypermatrices and random hypergraph ensembles", "hypereig"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());
  app.option_defaults()->always_capture_default();

  Common common;
  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help, bool seeded) -> CLI::App* {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, common, seeded);
    commands.push_back({sub, seeded, {}});
    return sub;
  };

  int bn = 0, bk = 0;
  {
    auto* sub = add("bounds", "Complete-gap spectral radius bound and exact row sums", false);
    sub->add_option("--n", bn, "Vertices")->required();
    sub->add_option("--k", bk, "Uniformity")->required();
    commands.back().run = [&] { return run_bounds(bn, bk); };
  }
  SpectrumOptions so;
  {
    auto* sub = add("spectrum", "Enumerate eigenpairs by multistart Newton", true);
    auto* in = sub->add_option("--input", so.input, "Hypergraph text file or JSON hypermatrix");
    sub->add_option("--ensemble", so.ensemble, "Ensemble specifier")->excludes(in);
    sub->add_option("--n", so.n, "Dimension");
    sub->add_option("--k", so.k, "Order");
    sub->add_option("--starts", so.starts, "Newton starts (0: 20 x expected count)");
    sub->add_option("--tol", so.tol, "Newton residual tolerance");
    sub->add_option("--dedup-tol", so.dedup_tol, "Relative eigenvalue merge tolerance");
    commands.back().run = [&] { return run_spectrum(so, common); };
  }
  PathOptions po;
  auto add_path_options = [&](CLI::App* sub) {
    sub->add_option("--a0", po.a0, "Start: ensemble specifier or file")->required();
    sub->add_option("--a1", po.a1, "End: ensemble specifier or file")->required();
    sub->add_option("--n", po.n, "Dimension");
    sub->add_option("--k", po.k, "Order");
    sub->add_option("--grid", po.grid, "Base grid points")->check(CLI::Range(2, 100000));
    sub->add_option("--refine-depth", po.refine_depth, "Bisections per base interval")->check(CLI::Range(0, 60));
    sub->add_option("--solver-starts", po.starts, "Newton starts for the t = 0 enumeration");
  };
  {
    auto* sub = add("path", "Track eigenvalue curves along A0 + t (A1 - A0)", true);
    add_path_options(sub);
    commands.back().run = [&] { return run_path(po, common); };
  }
  {
    auto* sub = add("weyl", "Endpoint eigenvalue gaps against the sigma-norm of A1 - A0", true);
    add_path_options(sub);
    sub->add_option("--starts", po.sigma_starts, "Sigma-norm ascent starts")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    commands.back().run = [&] { return run_weyl(po, common); };
  }
  TailOptions to;
  {
    auto* sub = add("tail", "Monte Carlo tail of |X : v^(k-1)|_2 for U or D", true);
    sub->add_option("--kind", to.kind, "upper or gap")->check(CLI::IsMember({"upper", "gap"}));
    sub->add_option("--n", to.n, "Dimension")->required();
    sub->add_option("--k", to.k, "Order")->required();
    sub->add_option("--p", to.p, "Edge probability");
    sub->add_option("--trials", to.trials, "Samples");
    sub->add_option("--thresholds", to.thresholds, "Threshold count (uniform in t^2)")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    sub->add_option("--vector", to.vector, "uniform or random")->check(CLI::IsMember({"uniform", "random"}));
    commands.back().run = [&] { return run_tail(to, common); };
  }
  NetOptions no;
  {
    auto* sub = add("net-check", "Build the epsilon-net and test coverage with random probes", true);
    sub->add_option("--n", no.n, "Dimension");
    sub->add_option("--k", no.k, "Order");
    sub->add_option("--samples", no.samples, "Random probes");
    sub->add_flag("--implicit", no.implicit, "Round probes onto the grid instead of storing the net");
    commands.back().run = [&] { return run_net_check(no, common); };
  }
  RadiusOptions ro;
  {
    auto* sub = add("radius-study", "Spectral radius of D(n,k,p) against B n^((k-1)/2) sqrt(log n)", true);
    sub->add_option("--k", ro.k, "Order");
    sub->add_option("--n-list", ro.n_list, "Dimensions")->delimiter(',');
    sub->add_option("--p", ro.p, "Edge probability");
    sub->add_option("--trials", ro.trials, "Samples per n");
    sub->add_option("--B", ro.b, "Scaling constant");
    sub->add_option("--starts", ro.starts, "Newton starts per sample (0: 20 x expected count)");
    commands.back().run = [&] { return run_radius_study(ro, common); };
  }
  HolderOptions ho;
  {
    auto* sub = add("holder", "Sweep |v^(k-1)|_2 >= n^(1-k/2) over random unit vectors", true);
    sub->add_option("--n", ho.n, "Dimension");
    sub->add_option("--k", ho.k, "Order");
    sub->add_option("--samples", ho.samples, "Vectors (the first is uniform)");
    commands.back().run = [&] { return run_holder(ho, common); };
  }
  std::string plot_input, plot_kind = "tail", plot_out;
  CLI::App* plot = app.add_subcommand("plot", "Render a tail or curves CSV as SVG");
  plot->add_option("--input", plot_input, "CSV produced by tail or path")->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", plot_kind, "tail or curves")->check(CLI::IsMember({"tail", "curves"}));
  plot->add_option("--out", plot_out, "SVG file")->required();
  std::string replay_manifest, replay_out;
  CLI::App* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("--manifest", replay_manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "Data file for the replay (default: the recorded one)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* failed = &app;
    for (const CLI::App* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return kExitParameter;
  }

  const std::string started = utc_timestamp();
  const auto clock0 = std::chrono::steady_clock::now();
  try {
    if (plot->parsed()) {
      if (same_file(plot_input, plot_out)) throw ParameterError("--out would overwrite the input CSV");
      plot_csv(plot_input, parse_plot_kind(plot_kind), plot_out);
      RunManifest m;
      m.subcommand = "plot";
      m.argv = args;
      m.params = option_params(plot);
      m.version = version_string();
      m.started_at = started;
      m.finished_at = utc_timestamp();
      m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
      m.outputs = {plot_out};
      write_file_atomic(manifest_path_for(plot_out), to_json(m).dump(2) + "\n");
      out << "wrote " << plot_out << '\n';
      return kExitOk;
    }
    if (replay->parsed()) {
      const RunManifest m = read_manifest(replay_manifest);
      std::vector<std::string> argv = m.argv;
      if (!argv.empty() && argv.front() == "replay") throw ParameterError("manifest records a replay");
      if (!replay_out.empty()) {
        const auto it = std::find(argv.begin(), argv.end(), "--out");
        if (it != argv.end() && it + 1 != argv.end()) {
          *(it + 1) = replay_out;
        } else {
          argv.push_back("--out");
          argv.push_back(replay_out);
        }
      }
      return run(argv, out, err);
    }

    const Command* chosen = nullptr;
    for (const auto& c : commands) {
      if (c.app->parsed()) chosen = &c;
    }
    if (chosen == nullptr) throw ParameterError("no subcommand");
    // An explicit --format wins; otherwise a .json --out selects JSON.
    if (chosen->app->get_option("--format")->count() == 0 && common.out.size() > 5 &&
        common.out.compare(common.out.size() - 5, 5, ".json") == 0) {
      common.format = "json";
    }

    Outcome outcome = chosen->run();
    for (const auto& input : outcome.inputs) {
      if (!common.out.empty() && same_file(input, common.out)) throw ParameterError("--out would overwrite an input file");
    }
    const std::string data = common.format == "json" ? outcome.doc.dump(2) + "\n" : outcome.csv;

    RunManifest m;
    m.subcommand = chosen->app->get_name();
    m.argv = args;
    m.params = option_params(chosen->app);
    if (chosen->seeded) m.seed = common.seed;
    m.version = version_string();
    m.started_at = started;
    m.finished_at = utc_timestamp();
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
    if (common.out.empty()) {
      out << data;
      err << outcome.summary;
      err << to_json(m).dump() << '\n';
    } else {
      write_file_atomic(common.out, data);
      m.outputs = {common.out};
      write_file_atomic(manifest_path_for(common.out), to_json(m).dump(2) + "\n");
      out << outcome.summary;
      out << "wrote " << common.out << " and " << manifest_path_for(common.out) << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace hypereig::cli
