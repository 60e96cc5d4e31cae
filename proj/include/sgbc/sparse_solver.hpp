#pragma once

#include <cstdint>
#include <vector>

#include "sgbc/common.hpp"

namespace sgbc {

/// Sparse LDL^T factorization (Eigen's simplicial factor with AMD ordering)
/// with a triangular solve that works on node-major blocks: every row of the
/// right-hand side is one spatial node, so the substitution runs as row
/// updates of width equal to the number of right-hand sides.
class SparseLdlt {
 public:
  SparseLdlt() = default;
  explicit SparseLdlt(const SparseMatrix& a);
  void factorize(const SparseMatrix& a);

  Index size() const { return n_; }
  bool ready() const { return n_ > 0; }

  /// Solves A X = B in place for every column of the block.
  void solve_in_place(RowMatrix& b) const;
  RowMatrix solve(const RowMatrix& b) const;
  Vector solve(const Vector& b) const;

  /// Number of single right-hand-side solves performed so far.
  std::uint64_t solve_count() const { return solves_; }
  void reset_count() const { solves_ = 0; }

 private:
  Index n_ = 0;
  std::vector<int> perm_;  // (P b)[perm_[i]] = b[i]
  // Strict lower factor L in CSR (row-major) and CSC (column-major) form.
  std::vector<int> lrow_ptr_, lrow_col_;
  std::vector<double> lrow_val_;
  std::vector<int> lcol_ptr_, lcol_row_;
  std::vector<double> lcol_val_;
  Vector dinv_;
  mutable std::uint64_t solves_ = 0;
};

}  // namespace sgbc
