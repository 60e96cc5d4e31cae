#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sgbc/common.hpp"

// Orthonormal Legendre chaos on Gamma = [-sqrt(3), sqrt(3)]^N with the uniform
// density (2 sqrt(3))^-N, i.e. every xi_k has zero mean and unit variance.

namespace sgbc {

using MultiIndex = std::vector<int>;

/// Total-degree multi-index set {alpha in N0^N : |alpha| <= Q}.
///
/// Ordering is graded: degree 0 first, then each degree block in descending
/// lexicographic order. Degree 1 therefore lists e_1, ..., e_N in coordinate
/// order, which puts the modes {1, xi_1, ..., xi_N} first. The set for a
/// smaller Q is a prefix of the set for a larger Q with the same N.
class MultiIndexSet {
 public:
  MultiIndexSet(int dimension, int degree);

  int dimension() const { return dimension_; }
  int degree() const { return degree_; }
  Index size() const { return static_cast<Index>(indices_.size()); }
  const MultiIndex& operator[](Index i) const { return indices_.at(static_cast<std::size_t>(i)); }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// Position of alpha, or -1 when |alpha| > Q.
  Index find(const MultiIndex& alpha) const;

 private:
  int dimension_;
  int degree_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, Index> lookup_;
};

/// (N+Q)! / (N! Q!), throwing DimensionError when it does not fit in 63 bits.
std::uint64_t chaos_dimension(int dimension, int degree);

/// Three-term recurrence coefficient of the univariate orthonormal family:
/// xi * psi_q = beta(q+1) psi_{q+1} + beta(q) psi_{q-1}.
double legendre_beta(int q);

/// Degree-q orthonormal polynomial at xi (points outside the interval are
/// extrapolated by the same recurrence).
double eval_univariate(int degree, double xi);

class GpcBasis {
 public:
  explicit GpcBasis(MultiIndexSet index_set);

  const MultiIndexSet& index_set() const { return index_set_; }
  int dimension() const { return index_set_.dimension(); }
  int degree() const { return index_set_.degree(); }
  Index size() const { return index_set_.size(); }

  /// psi_i(xi) for the 0-based index i.
  double eval(Index i, std::span<const double> xi) const;

  /// All basis values at xi.
  Vector eval_all(std::span<const double> xi) const;

 private:
  MultiIndexSet index_set_;
};

/// Stochastic Galerkin moments:
///   Pbar_ij = E[psi_i psi_j], P_k,ij = E[xi_k psi_i psi_j],
///   pbar_i = E[psi_i], p_k,i = E[xi_k psi_i].
/// Entries come straight from the recurrence coefficients.
struct StochasticMoments {
  SparseMatrix Pbar;
  std::vector<SparseMatrix> P;
  Vector pbar;
  std::vector<Vector> p;
};

StochasticMoments assemble_moments(const GpcBasis& basis);

}  // namespace sgbc
