#include "sgbc/sparse_solver.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

#include "sgbc/simd.hpp"

namespace sgbc {

SparseLdlt::SparseLdlt(const SparseMatrix& a) { factorize(a); }

void SparseLdlt::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("LDL^T needs a square matrix");
  using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  const ColMatrix col = a;
  Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(col);
  if (ldlt.info() != Eigen::Success) throw NumericalError("sparse LDL^T factorization failed");
  n_ = a.rows();

  // Eigen solves with x = P^-1 L^-T D^-1 L^-1 P b.
  const auto& p = ldlt.permutationP();
  perm_.assign(static_cast<std::size_t>(n_), 0);
  for (Index i = 0; i < n_; ++i) perm_[static_cast<std::size_t>(i)] = p.indices()[i];

  const Vector d = ldlt.vectorD();
  dinv_.resize(n_);
  for (Index i = 0; i < n_; ++i) {
    if (!(std::abs(d[i]) > 0.0) || !std::isfinite(d[i])) throw NumericalError("sparse LDL^T: zero pivot");
    dinv_[i] = 1.0 / d[i];
  }

  ColMatrix l = ldlt.matrixL();
  l.prune([](Index r, Index c, double) { return r != c; });
  l.makeCompressed();
  lcol_ptr_.assign(l.outerIndexPtr(), l.outerIndexPtr() + n_ + 1);
  lcol_row_.assign(l.innerIndexPtr(), l.innerIndexPtr() + l.nonZeros());
  lcol_val_.assign(l.valuePtr(), l.valuePtr() + l.nonZeros());
  Eigen::SparseMatrix<double, Eigen::RowMajor, int> lr = l;
  lr.makeCompressed();
  lrow_ptr_.assign(lr.outerIndexPtr(), lr.outerIndexPtr() + n_ + 1);
  lrow_col_.assign(lr.innerIndexPtr(), lr.innerIndexPtr() + lr.nonZeros());
  lrow_val_.assign(lr.valuePtr(), lr.valuePtr() + lr.nonZeros());
}

void SparseLdlt::solve_in_place(RowMatrix& b) const {
  if (b.rows() != n_) throw DimensionError("LDL^T solve: right-hand side has the wrong length");
  const auto w = static_cast<std::size_t>(b.cols());
  if (w == 0) return;
  const auto& k = simd::kernels();
  RowMatrix z(n_, b.cols());
  for (Index i = 0; i < n_; ++i) z.row(perm_[static_cast<std::size_t>(i)]) = b.row(i);
  // L z = P b, row by row.
  for (Index i = 0; i < n_; ++i) {
    double* zi = z.data() + i * static_cast<Index>(w);
    for (int e = lrow_ptr_[static_cast<std::size_t>(i)]; e < lrow_ptr_[static_cast<std::size_t>(i) + 1]; ++e)
      k.axpy(-lrow_val_[static_cast<std::size_t>(e)], z.data() + lrow_col_[static_cast<std::size_t>(e)] * static_cast<Index>(w),
             zi, w);
  }
  for (Index i = 0; i < n_; ++i) z.row(i) *= dinv_[i];
  // L^T x = z, walking the columns of L backwards.
  for (Index i = n_ - 1; i >= 0; --i) {
    double* zi = z.data() + i * static_cast<Index>(w);
    for (int e = lcol_ptr_[static_cast<std::size_t>(i)]; e < lcol_ptr_[static_cast<std::size_t>(i) + 1]; ++e)
      k.axpy(-lcol_val_[static_cast<std::size_t>(e)], z.data() + lcol_row_[static_cast<std::size_t>(e)] * static_cast<Index>(w),
             zi, w);
  }
  for (Index i = 0; i < n_; ++i) b.row(i) = z.row(perm_[static_cast<std::size_t>(i)]);
  solves_ += w;
}

RowMatrix SparseLdlt::solve(const RowMatrix& b) const {
  RowMatrix x = b;
  solve_in_place(x);
  return x;
}

Vector SparseLdlt::solve(const Vector& b) const {
  RowMatrix x = b;
  solve_in_place(x);
  return x.col(0);
}

}  // namespace sgbc
