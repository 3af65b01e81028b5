#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypereig/combinatorics.hpp"
#include "hypereig/types.hpp"

namespace hypereig {

class GeneralHypermatrix;

/// Fully symmetric cubical hypermatrix of order k and dimension n.
///
/// Only one value per sorted (non-decreasing) multiindex is stored, in
/// colexicographic order, so the footprint is C(n+k-1, k) instead of n^k.
/// Lookups at an unsorted multiindex resolve to the sorted representative.
/// Orders 0 and 1 are allowed and represent scalars and vectors produced by
/// contractions.
class SymmetricHypermatrix {
 public:
  SymmetricHypermatrix() = default;
  SymmetricHypermatrix(int order, int dim);
  SymmetricHypermatrix(int order, int dim, CVector compact_values);

  /// Builds the compact array by calling `value(sorted_index)` once per
  /// sorted multiindex, in colex order.
  template <class F>
  static SymmetricHypermatrix generate(int order, int dim, F&& value) {
    SymmetricHypermatrix out(order, dim);
    MultiIndex index(static_cast<std::size_t>(order), 0);
    std::size_t slot = 0;
    do {
      out.values_[slot++] = value(std::span<const int>(index));
    } while (next_colex_multiset(index, dim));
    return out;
  }

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t compact_size() const { return values_.size(); }
  std::span<const Complex> compact() const { return values_; }

  Complex at(std::span<const int> index) const;
  void set(std::span<const int> index, Complex value);

  /// Position of the sorted multiindex in the compact array.
  std::size_t rank_sorted(std::span<const int> sorted) const {
    return static_cast<std::size_t>(rank_combination_of(sorted));
  }
  std::size_t rank(std::span<const int> index) const;

  /// Visits every sorted multiindex with its value, in storage order.
  template <class F>
  void for_each(F&& visit) const {
    MultiIndex index(static_cast<std::size_t>(order_), 0);
    std::size_t slot = 0;
    do {
      visit(std::span<const int>(index), values_[slot++]);
    } while (next_colex_multiset(index, dim_));
  }

  GeneralHypermatrix to_dense() const;

  bool is_real() const;
  bool is_nonnegative(double tol = 0.0) const;

  SymmetricHypermatrix operator+(const SymmetricHypermatrix& other) const;
  SymmetricHypermatrix operator-(const SymmetricHypermatrix& other) const;
  SymmetricHypermatrix scaled(Complex factor) const;

 private:
  std::uint64_t rank_combination_of(std::span<const int> sorted) const;
  void check_index(std::span<const int> index) const;

  int order_ = 0;
  int dim_ = 1;
  BinomialTable binom_;
  CVector values_{Complex{0.0, 0.0}};
};

/// Dense cubical hypermatrix with all n^k entries, row-major (first slot
/// most significant). Used for non-symmetric ensembles and as the reference
/// layout for contraction.
class GeneralHypermatrix {
 public:
  GeneralHypermatrix() = default;
  GeneralHypermatrix(int order, int dim);
  GeneralHypermatrix(int order, int dim, CVector data);

  static GeneralHypermatrix from_vector(std::span<const Complex> v);
  static GeneralHypermatrix scalar(Complex value, int dim = 1);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }
  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  std::size_t offset(std::span<const int> index) const;
  void unravel(std::size_t offset, std::span<int> index) const;
  Complex at(std::span<const int> index) const { return data_[offset(index)]; }
  Complex& at(std::span<const int> index) { return data_[offset(index)]; }

  bool is_symmetric(double tol = kDefaultEqualityTol) const;
  /// Throws PreconditionError when the entries are not permutation invariant.
  SymmetricHypermatrix to_symmetric(double tol = kDefaultEqualityTol) const;

 private:
  int order_ = 0;
  int dim_ = 1;
  CVector data_{Complex{0.0, 0.0}};
};

SymmetricHypermatrix identity_hypermatrix(int dim, int order);
SymmetricHypermatrix all_ones_hypermatrix(int dim, int order);

SymmetricHypermatrix hadamard(const SymmetricHypermatrix& a, const SymmetricHypermatrix& b);
GeneralHypermatrix hadamard(const GeneralHypermatrix& a, const GeneralHypermatrix& b);

GeneralHypermatrix tensor_product(const GeneralHypermatrix& a, const GeneralHypermatrix& b);
/// X^{⊗m} = X ⊗ X^{⊗(m-1)}.
GeneralHypermatrix tensor_power(const GeneralHypermatrix& x, int m);

/// (A :_S B): sums A over the slots listed in `slots` (zero-based, any order;
/// they are matched to B's slots in increasing slot order). Free slots keep
/// their relative order.
GeneralHypermatrix contract(const GeneralHypermatrix& a, std::span<const int> slots,
                            const GeneralHypermatrix& b);
/// Symmetric A: the slot set is immaterial, the last order(B) slots are used.
GeneralHypermatrix contract(const SymmetricHypermatrix& a, const GeneralHypermatrix& b);

/// A : v^{⊗m}, computed on the compact storage without forming v^{⊗m}.
/// The result is symmetric of order k - m.
SymmetricHypermatrix contract_vector_power(const SymmetricHypermatrix& a,
                                           std::span<const Complex> v, int m);
GeneralHypermatrix apply_vector_power(const SymmetricHypermatrix& a, std::span<const Complex> v,
                                      int m);
/// Contracts the last m slots of a dense hypermatrix with v.
GeneralHypermatrix apply_vector_power(const GeneralHypermatrix& a, std::span<const Complex> v,
                                      int m);

/// A : v^{⊗(k-1)} as a vector.
CVector contract_to_vector(const SymmetricHypermatrix& a, std::span<const Complex> v);
/// A : v^{⊗k}.
Complex form_value(const SymmetricHypermatrix& a, std::span<const Complex> v);

/// A^{:t} = J : A^{∘t}, the sum of t-th powers over all n^k multiindices.
Complex entry_power_sum(const SymmetricHypermatrix& a, int t);
Complex entry_power_sum(const GeneralHypermatrix& a, int t);
Complex entry_power_sum(std::span<const Complex> v, int t);

/// Output entry at i equals input entry at (i_{σ(0)}, ..., i_{σ(k-1)}).
/// Consequently (A^σ)^τ = A^{τ∘σ}, with (τ∘σ)(j) = τ(σ(j)).
GeneralHypermatrix permute_indices(const GeneralHypermatrix& a, std::span<const int> sigma);
std::vector<int> compose_permutations(std::span<const int> outer, std::span<const int> inner);
std::vector<int> inverse_permutation(std::span<const int> sigma);

/// Σ_{σ ∈ S_k} A^σ.
GeneralHypermatrix permutation_sum(const GeneralHypermatrix& a);

/// (Σ |v_j|^p)^{1/p}.
double knorm(std::span<const Complex> v, double p);
/// v / ‖v‖₂; throws DegeneracyError for the zero vector.
CVector normalized(std::span<const Complex> v);
/// v^{∘e}.
CVector hadamard_power(std::span<const Complex> v, int e);

bool approx_equal(const SymmetricHypermatrix& a, const SymmetricHypermatrix& b,
                  double tol = kDefaultEqualityTol);
bool approx_equal(const GeneralHypermatrix& a, const GeneralHypermatrix& b,
                  double tol = kDefaultEqualityTol);

}  // namespace hypereig
