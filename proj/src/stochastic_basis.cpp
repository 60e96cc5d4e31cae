#include "sgbc/stochastic_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sgbc {

std::uint64_t chaos_dimension(int dimension, int degree) {
  if (dimension < 1 || degree < 0)
    throw DimensionError("chaos dimension needs N >= 1 and Q >= 0");
  // C(N+Q, Q) built as prod_{j=1..Q} (N+j)/j; every partial product is an
  // integer binomial coefficient.
  std::uint64_t value = 1;
  const auto limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  for (int j = 1; j <= degree; ++j) {
    const auto factor = static_cast<std::uint64_t>(dimension + j);
    if (value > limit / factor)
      throw DimensionError("chaos dimension (N+Q)!/(N!Q!) overflows for N=" +
                           std::to_string(dimension) + ", Q=" + std::to_string(degree));
    value = value * factor / static_cast<std::uint64_t>(j);
  }
  return value;
}

namespace {

// Emits all multi-indices of total degree `remaining` on coordinates
// [pos, N) in descending lexicographic order.
void emit_degree(int pos, int remaining, MultiIndex& current, std::vector<MultiIndex>& out) {
  const int n = static_cast<int>(current.size());
  if (pos == n - 1) {
    current[pos] = remaining;
    out.push_back(current);
    current[pos] = 0;
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    current[pos] = v;
    emit_degree(pos + 1, remaining - v, current, out);
  }
  current[pos] = 0;
}

}  // namespace

MultiIndexSet::MultiIndexSet(int dimension, int degree) : dimension_(dimension), degree_(degree) {
  const std::uint64_t count = chaos_dimension(dimension, degree);
  constexpr std::uint64_t kMaxBasis = 1u << 22;
  if (count > kMaxBasis)
    throw DimensionError("chaos basis of size " + std::to_string(count) + " exceeds the supported " +
                         std::to_string(kMaxBasis));
  indices_.reserve(static_cast<std::size_t>(count));
  MultiIndex current(static_cast<std::size_t>(dimension), 0);
  for (int d = 0; d <= degree; ++d) emit_degree(0, d, current, indices_);
  for (std::size_t i = 0; i < indices_.size(); ++i) lookup_.emplace(indices_[i], static_cast<Index>(i));
}

Index MultiIndexSet::find(const MultiIndex& alpha) const {
  const auto it = lookup_.find(alpha);
  return it == lookup_.end() ? -1 : it->second;
}

double legendre_beta(int q) {
  if (q <= 0) return 0.0;
  const double dq = q;
  return std::sqrt(3.0) * dq / std::sqrt(4.0 * dq * dq - 1.0);
}

double eval_univariate(int degree, double xi) {
  if (degree < 0) throw DimensionError("negative polynomial degree");
  double prev = 0.0;
  double cur = 1.0;
  for (int q = 0; q < degree; ++q) {
    const double next = (xi * cur - legendre_beta(q) * prev) / legendre_beta(q + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

GpcBasis::GpcBasis(MultiIndexSet index_set) : index_set_(std::move(index_set)) {}

double GpcBasis::eval(Index i, std::span<const double> xi) const {
  if (i < 0 || i >= size())
    throw DimensionError("basis index " + std::to_string(i) + " out of range [0, " +
                         std::to_string(size()) + ")");
  if (static_cast<int>(xi.size()) != dimension())
    throw DimensionError("point dimension does not match the basis");
  const MultiIndex& alpha = index_set_[i];
  double value = 1.0;
  for (std::size_t k = 0; k < alpha.size(); ++k)
    if (alpha[k] != 0) value *= eval_univariate(alpha[k], xi[k]);
  return value;
}

Vector GpcBasis::eval_all(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dimension())
    throw DimensionError("point dimension does not match the basis");
  const int n = dimension();
  const int q = degree();
  // table[k][d] = psi_d(xi_k)
  std::vector<double> table(static_cast<std::size_t>(n * (q + 1)));
  for (int k = 0; k < n; ++k)
    for (int d = 0; d <= q; ++d) table[static_cast<std::size_t>(k * (q + 1) + d)] = eval_univariate(d, xi[k]);
  Vector out(size());
  for (Index i = 0; i < size(); ++i) {
    double v = 1.0;
    const MultiIndex& alpha = index_set_[i];
    for (int k = 0; k < n; ++k)
      if (alpha[k] != 0) v *= table[static_cast<std::size_t>(k * (q + 1) + alpha[k])];
    out[i] = v;
  }
  return out;
}

StochasticMoments assemble_moments(const GpcBasis& basis) {
  const Index n = basis.size();
  const int dim = basis.dimension();
  const MultiIndexSet& set = basis.index_set();

  StochasticMoments m;
  m.Pbar.resize(n, n);
  m.Pbar.setIdentity();
  m.pbar = Vector::Unit(n, 0);

  m.P.reserve(static_cast<std::size_t>(dim));
  m.p.reserve(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    std::vector<Triplet> triplets;
    for (Index i = 0; i < n; ++i) {
      MultiIndex alpha = set[i];
      // xi_k psi_alpha = beta(a+1) psi_{alpha+e_k} + beta(a) psi_{alpha-e_k}
      const int a = alpha[static_cast<std::size_t>(k)];
      alpha[static_cast<std::size_t>(k)] = a + 1;
      if (Index j = set.find(alpha); j >= 0)
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), legendre_beta(a + 1));
      if (a > 0) {
        alpha[static_cast<std::size_t>(k)] = a - 1;
        if (Index j = set.find(alpha); j >= 0)
          triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), legendre_beta(a));
      }
    }
    SparseMatrix pk(n, n);
    pk.setFromTriplets(triplets.begin(), triplets.end());
    pk.makeCompressed();
    Vector col(n);
    for (Index i = 0; i < n; ++i) col[i] = pk.coeff(i, 0);
    m.P.push_back(std::move(pk));
    m.p.push_back(std::move(col));
  }
  return m;
}

}  // namespace sgbc
