#include "hypereig/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hypereig/error.hpp"
#include "hypereig/rng.hpp"

namespace hypereig {

namespace {

void require_uniform_shape(int n, int k) {
  if (k < 2) throw ParameterError("uniformity k must be >= 2");
  if (n < k) throw ParameterError("need n >= k, got n=" + std::to_string(n) + " k=" + std::to_string(k));
}

// Random ensembles also accept n < k: G_k(n, p) is then empty.
void require_random_shape(int n, int k) {
  if (k < 2) throw ParameterError("uniformity k must be >= 2");
  if (n < 1) throw ParameterError("vertex count must be >= 1");
}

void require_open_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1)");
}

bool colex_less(const MultiIndex& a, const MultiIndex& b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

double inverse_factorial(int m) { return 1.0 / static_cast<double>(factorial(static_cast<unsigned>(m))); }

// Calls visit(edge_rank, combination, is_edge) for every k-subset in colex order.
template <class F>
void for_each_edge_draw(int n, int k, double p, std::uint64_t seed, F&& visit) {
  if (n < k) return;
  const CounterRng rng(seed, Stream::kEdge);
  MultiIndex c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[i] = i;
  std::uint64_t rank = 0;
  do {
    visit(c, rng.uniform(rank) < p);
    ++rank;
  } while (next_colex_combination(c, n));
}

}  // namespace

Hypergraph::Hypergraph(int n, int k, std::vector<MultiIndex> edges) : n_(n), k_(k), edges_(std::move(edges)) {
  if (k < 2) throw ParameterError("uniformity k must be >= 2");
  if (n < 1) throw ParameterError("vertex count must be >= 1");
  for (auto& e : edges_) {
    if (e.size() != static_cast<std::size_t>(k)) throw ParameterError("edge does not have k vertices");
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw ParameterError("edge repeats a vertex");
    if (e.front() < 0 || e.back() >= n) throw ParameterError("edge vertex out of range");
  }
  std::sort(edges_.begin(), edges_.end(), colex_less);
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ParameterError("duplicate edge");
  }
}

Hypergraph complete_hypergraph(int n, int k) {
  require_uniform_shape(n, k);
  std::vector<MultiIndex> edges;
  MultiIndex c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[i] = i;
  do {
    edges.push_back(c);
  } while (next_colex_combination(c, n));
  return {n, k, std::move(edges)};
}

Hypergraph random_hypergraph(int n, int k, double p, std::uint64_t seed) {
  require_random_shape(n, k);
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  std::vector<MultiIndex> edges;
  for_each_edge_draw(n, k, p, seed, [&](const MultiIndex& c, bool is_edge) {
    if (is_edge) edges.push_back(c);
  });
  return {n, k, std::move(edges)};
}

SymmetricHypermatrix adjacency_hypermatrix(const Hypergraph& h) {
  SymmetricHypermatrix out(h.uniformity(), h.vertex_count());
  const Complex value{inverse_factorial(h.uniformity() - 1), 0.0};
  for (const auto& e : h.edges()) out.set(e, value);
  return out;
}

SymmetricHypermatrix complete_gap(int n, int k) {
  if (k < 2 || n <= k) throw ParameterError("complete gap needs n > k >= 2");
  const Complex value{inverse_factorial(k - 1), 0.0};
  return SymmetricHypermatrix::generate(k, n, [&](std::span<const int> s) {
    return std::adjacent_find(s.begin(), s.end()) != s.end() ? value : Complex{0.0, 0.0};
  });
}

SymmetricHypermatrix random_gap(int n, int k, double p, std::uint64_t seed) {
  require_random_shape(n, k);
  require_open_probability(p);
  const SymmetricHypermatrix shape(k, n);
  CVector values(shape.compact_size(), Complex{p, 0.0});
  for_each_edge_draw(n, k, p, seed, [&](const MultiIndex& c, bool is_edge) {
    if (is_edge) values[shape.rank_sorted(c)] = Complex{p - 1.0, 0.0};
  });
  return {k, n, std::move(values)};
}

SymmetricHypermatrix sign_ensemble(int n, int k, std::uint64_t seed) {
  return random_gap(n, k, 0.5, seed).scaled(2.0);
}

GeneralHypermatrix upper_ensemble(int n, int k, double p, std::uint64_t seed) {
  require_uniform_shape(n, k);
  require_open_probability(p);
  GeneralHypermatrix out(k, n);
  for_each_edge_draw(n, k, p, seed, [&](const MultiIndex& c, bool is_edge) {
    out.at(c) = Complex{is_edge ? p - 1.0 : p, 0.0};
  });
  return out;
}

SymmetricHypermatrix build_symmetric(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::kCompleteGap:
      return complete_gap(spec.n, spec.k);
    case EnsembleKind::kRandomGap:
      return random_gap(spec.n, spec.k, spec.p, spec.seed);
    case EnsembleKind::kSign:
      return sign_ensemble(spec.n, spec.k, spec.seed);
    case EnsembleKind::kUpper:
      break;
  }
  throw ParameterError("the upper ensemble is not symmetric");
}

Hypergraph read_hypergraph(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("hypergraph file is empty");
  std::istringstream header(line);
  long long k = 0, n = 0, m = 0;
  if (!(header >> k >> n >> m) || k < 2 || n < 1 || m < 0) {
    throw ParseError("header must be 'k n m' with k >= 2, n >= 1, m >= 0");
  }
  std::string rest;
  if (header >> rest) throw ParseError("trailing tokens in header");
  std::vector<MultiIndex> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    if (!next_line()) throw ParseError("expected " + std::to_string(m) + " edges, found " + std::to_string(e));
    std::istringstream row(line);
    MultiIndex edge;
    long long label = 0;
    while (row >> label) {
      if (label < 1 || label > n) throw ParseError("vertex label out of range on edge " + std::to_string(e + 1));
      edge.push_back(static_cast<int>(label - 1));
    }
    if (!row.eof()) throw ParseError("non-integer token on edge " + std::to_string(e + 1));
    if (edge.size() != static_cast<std::size_t>(k)) throw ParseError("edge " + std::to_string(e + 1) + " does not have k labels");
    if (!std::is_sorted(edge.begin(), edge.end()) || std::adjacent_find(edge.begin(), edge.end()) != edge.end()) {
      throw ParseError("edge " + std::to_string(e + 1) + " is not strictly increasing");
    }
    edges.push_back(std::move(edge));
  }
  if (next_line()) throw ParseError("more edge lines than announced");
  try {
    return {static_cast<int>(n), static_cast<int>(k), std::move(edges)};
  } catch (const ParameterError& err) {
    throw ParseError(err.what());
  }
}

Hypergraph read_hypergraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_hypergraph(in);
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << h.uniformity() << ' ' << h.vertex_count() << ' ' << h.edge_count() << '\n';
  for (const auto& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i] + 1;
    out << '\n';
  }
}

}  // namespace hypereig
