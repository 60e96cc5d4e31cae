#include "sgbc/preconditioner.hpp"

namespace sgbc {

namespace {

double frobenius(const SparseMatrix& a, const SparseMatrix& b) {
  // tr(A^T B) = sum_ij A_ij B_ij; both share the mesh pattern but are not
  // assumed to, so walk both rows in column order.
  double sum = 0.0;
  for (Index r = 0; r < a.outerSize(); ++r) {
    SparseMatrix::InnerIterator ia(a, r);
    SparseMatrix::InnerIterator ib(b, r);
    while (ia && ib) {
      if (ia.col() == ib.col()) {
        sum += ia.value() * ib.value();
        ++ia;
        ++ib;
      } else if (ia.col() < ib.col()) {
        ++ia;
      } else {
        ++ib;
      }
    }
  }
  return sum;
}

}  // namespace

PreconditionerVariant parse_variant(const std::string& name, int degree) {
  if (name == "mean" || name == "mean_based") return PreconditionerVariant::mean_based;
  if (name == "ullmann") return PreconditionerVariant::ullmann;
  if (name == "auto") return degree <= 3 ? PreconditionerVariant::mean_based : PreconditionerVariant::ullmann;
  throw ConfigError("unknown preconditioner '" + name + "' (expected mean, ullmann or auto)");
}

std::string variant_name(PreconditionerVariant v) {
  return v == PreconditionerVariant::mean_based ? "mean_based" : "ullmann";
}

BlockPreconditioner::BlockPreconditioner(const SgSystem& sg, PreconditionerVariant variant)
    : sg_(sg), variant_(variant), kbar_(sg.Kbar_II), mass_(sg.Mspatial_II) {
  control_.compute(sg.control_block());
  if (control_.info() != Eigen::Success) throw NumericalError("control block M_BB + alpha M_dD is not positive definite");

  const Index nm = sg.n_modes;
  g_ = DenseMatrix::Identity(nm, nm);
  const double kk = frobenius(sg.Kbar_II, sg.Kbar_II);
  for (const auto& k : sg.K_k_II) ratios_.push_back(frobenius(k, sg.Kbar_II) / kk);
  if (variant_ == PreconditionerVariant::ullmann) {
    for (std::size_t k = 0; k < ratios_.size(); ++k) g_ += ratios_[k] * DenseMatrix(sg.P_k[k]);
    g_llt_.compute(g_);
    if (g_llt_.info() != Eigen::Success) throw NumericalError("Ullmann matrix G is not positive definite");
  }
}

void BlockPreconditioner::reset_counters() const {
  kbar_.reset_count();
  g_solves_ = 0;
}

void BlockPreconditioner::apply_mass_inverse(RowMatrix& v) const { mass_.solve_in_place(v); }

void BlockPreconditioner::apply_control_inverse(Vector& v) const { v = control_.solve(v); }

void BlockPreconditioner::apply_khat_inverse(RowMatrix& v) const {
  kbar_.solve_in_place(v);
  if (variant_ == PreconditionerVariant::ullmann) {
    // (G (x) Kbar)^-1 on node-major blocks: Kbar^-1 V G^-1, G symmetric.
    v = g_llt_.solve(v.transpose()).transpose();
    g_solves_ += static_cast<std::uint64_t>(v.rows());
  }
}

void BlockPreconditioner::apply_schur_hat_inverse(RowMatrix& v) const {
  apply_khat_inverse(v);
  RowMatrix mv(v.rows(), v.cols());
  sg_.M_II.apply(v, mv);
  apply_khat_inverse(mv);
  v.swap(mv);
}

void BlockPreconditioner::apply(const Vector& x, Vector& y) const {
  const Index nb = sg_.block_size();
  const Index nbd = sg_.n_boundary;
  if (x.size() != size()) throw DimensionError("preconditioner: input has the wrong length");
  y.resize(size());
  RowMatrix a = ConstBlockMap(x.data(), sg_.n_interior, sg_.n_modes);
  apply_mass_inverse(a);
  Vector u = x.segment(nb, nbd);
  apply_control_inverse(u);
  RowMatrix c = ConstBlockMap(x.data() + nb + nbd, sg_.n_interior, sg_.n_modes);
  apply_schur_hat_inverse(c);
  y.head(nb) = Eigen::Map<const Vector>(a.data(), nb);
  y.segment(nb, nbd) = u;
  y.tail(nb) = Eigen::Map<const Vector>(c.data(), nb);
}

}  // namespace sgbc
