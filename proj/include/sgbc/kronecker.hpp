#pragma once

#include <vector>

#include "sgbc/common.hpp"

namespace sgbc {

/// Sum of Kronecker products sum_t S_t (x) A_t acting on node-major blocks:
///
///   Y = sum_t A_t X S_t^T,   X: cols(A) x cols(S),  Y: rows(A) x rows(S),
///
/// where row n of a block holds the stochastic modes of spatial node n. This
/// is the matricized form of (sum_t S_t (x) A_t) vec(X) with vec stacking the
/// stochastic modes. Spatial matrices are merged into one CSR pattern with
/// interleaved term values so one sweep over a row serves every term.
class KroneckerSum {
 public:
  struct Term {
    SparseMatrix stochastic;  // S_t
    SparseMatrix spatial;     // A_t
  };

  KroneckerSum() = default;
  explicit KroneckerSum(std::vector<Term> terms);

  Index spatial_rows() const { return spatial_rows_; }
  Index spatial_cols() const { return spatial_cols_; }
  Index modes_out() const { return modes_out_; }
  Index modes_in() const { return modes_in_; }
  Index rows() const { return spatial_rows_ * modes_out_; }
  Index cols() const { return spatial_cols_ * modes_in_; }
  std::size_t terms() const { return stochastic_.size(); }

  /// Y (+)= op(X). With accumulate=false Y is overwritten.
  void apply(const RowMatrix& x, RowMatrix& y, bool accumulate = false) const;
  /// Y (+)= op^T(X) = sum_t A_t^T X S_t.
  void apply_transpose(const RowMatrix& x, RowMatrix& y, bool accumulate = false) const;

  /// Raw forms on contiguous node-major storage of the right shapes.
  void apply(const double* x, double* y, bool accumulate = false) const;
  void apply_transpose(const double* x, double* y, bool accumulate = false) const;

  /// Dense matrix in node-major ordering (row n*modes_out + i). Test and export only.
  DenseMatrix materialize() const;

 private:
  struct Merged {
    std::vector<int> row_ptr;
    std::vector<int> cols;
    std::vector<double> vals;  // vals[e*terms + t]
  };
  static Merged merge(const std::vector<const SparseMatrix*>& mats, Index rows);
  void apply_merged(const Merged& a, bool transpose_s, const double* x, std::size_t width, double* y,
                    Index modes_out, bool accumulate) const;

  Index spatial_rows_ = 0;
  Index spatial_cols_ = 0;
  Index modes_out_ = 0;
  Index modes_in_ = 0;
  std::vector<SparseMatrix> stochastic_;    // S_t
  std::vector<SparseMatrix> stochastic_t_;  // S_t^T
  std::vector<char> identity_;              // S_t is the identity
  Merged forward_;
  Merged backward_;  // merged A_t^T
};

}  // namespace sgbc
