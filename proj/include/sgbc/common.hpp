#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace sgbc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
/// Row-major dense block; used for node-major multi-vectors where row n holds
/// the stochastic modes of spatial node n.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

using BlockMap = Eigen::Map<RowMatrix>;
using ConstBlockMap = Eigen::Map<const RowMatrix>;

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Square linear map y = A x on flat vectors.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index size() const = 0;
  virtual void apply(const Vector& x, Vector& y) const = 0;
};

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(Index n) : n_(n) {}
  Index size() const override { return n_; }
  void apply(const Vector& x, Vector& y) const override { y = x; }

 private:
  Index n_;
};

/// Wraps an explicit matrix (dense or sparse).
template <class Matrix>
class MatrixOperator final : public LinearOperator {
 public:
  explicit MatrixOperator(const Matrix& m) : m_(m) {}
  Index size() const override { return m_.rows(); }
  void apply(const Vector& x, Vector& y) const override { y = m_ * x; }

 private:
  const Matrix& m_;
};

/// Materializes an operator column by column. Test and export helper.
DenseMatrix materialize(const LinearOperator& op);

}  // namespace sgbc
