#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hypereig/hypermatrix.hpp"

namespace hypereig {

/// k-uniform hypergraph on vertices {0, ..., n-1}. Edges are stored sorted
/// and in colexicographic order; construction rejects out-of-range vertices,
/// repeated vertices inside an edge, and duplicate edges.
class Hypergraph {
 public:
  Hypergraph(int n, int k, std::vector<MultiIndex> edges = {});

  int vertex_count() const { return n_; }
  int uniformity() const { return k_; }
  const std::vector<MultiIndex>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool operator==(const Hypergraph&) const = default;

 private:
  int n_;
  int k_;
  std::vector<MultiIndex> edges_;
};

enum class EnsembleKind { kCompleteGap, kRandomGap, kUpper, kSign };

struct EnsembleSpec {
  int n = 0;
  int k = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  EnsembleKind kind = EnsembleKind::kRandomGap;
};

/// K_n^k with all C(n, k) edges.
Hypergraph complete_hypergraph(int n, int k);

/// G_k(n, p): the k-subset with colex rank e is an edge iff the edge-stream
/// uniform draw at counter e is below p.
Hypergraph random_hypergraph(int n, int k, double p, std::uint64_t seed);

/// Entries 1/(k-1)! on every ordering of an edge, zero elsewhere.
SymmetricHypermatrix adjacency_hypermatrix(const Hypergraph& h);

/// B(n, k) = J/(k-1)! - A(K_n^k): 1/(k-1)! on multiindices with a repeated
/// vertex, 0 on all-distinct ones. Requires n > k.
SymmetricHypermatrix complete_gap(int n, int k);

/// D(n, k, p) = p J - (k-1)! A(G_k(n, p)), sharing the edge draws of
/// random_hypergraph with the same seed.
SymmetricHypermatrix random_gap(int n, int k, double p, std::uint64_t seed);

/// 2 D(n, k, 1/2).
SymmetricHypermatrix sign_ensemble(int n, int k, std::uint64_t seed);

/// U(n, k, p): p - 1[edge] on strictly increasing multiindices (the same
/// draws as random_gap), zero elsewhere. Not symmetric.
GeneralHypermatrix upper_ensemble(int n, int k, double p, std::uint64_t seed);

/// Dispatches on spec.kind; kUpper is rejected since it is not symmetric.
SymmetricHypermatrix build_symmetric(const EnsembleSpec& spec);

/// Text format: "k n m" then m lines of k increasing one-based labels.
Hypergraph read_hypergraph(std::istream& in);
Hypergraph read_hypergraph_file(const std::string& path);
void write_hypergraph(std::ostream& out, const Hypergraph& h);

}  // namespace hypereig
