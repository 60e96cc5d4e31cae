#include "sgbc/common.hpp"

namespace sgbc {

DenseMatrix materialize(const LinearOperator& op) {
  const Index n = op.size();
  DenseMatrix out(n, n);
  Vector e = Vector::Zero(n);
  Vector col;
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    out.col(j) = col;
    e[j] = 0.0;
  }
  return out;
}

}  // namespace sgbc
