#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgbc/common.hpp"
#include "sgbc/sg_system.hpp"
#include "sgbc/sparse_solver.hpp"

namespace sgbc {

enum class PreconditionerVariant { mean_based, ullmann };

PreconditionerVariant parse_variant(const std::string& name, int degree);
std::string variant_name(PreconditionerVariant v);

/// Block-diagonal preconditioner diag(I (x) M_II, S_M, S_hat) for the saddle
/// system, applied as its inverse. S_M = M_BB + alpha M_dD is factorized
/// densely; S_hat = K_hat (I (x) M_II)^-1 K_hat with
///   mean-based: K_hat = I (x) Kbar_II
///   ullmann:    K_hat = G (x) Kbar_II,
///               G = I + sum_k tr(K_k,II^T Kbar_II) / tr(Kbar_II^T Kbar_II) P_k.
class BlockPreconditioner final : public LinearOperator {
 public:
  BlockPreconditioner(const SgSystem& sg, PreconditionerVariant variant);

  Index size() const override { return sg_.saddle_size(); }
  void apply(const Vector& x, Vector& y) const override;

  PreconditionerVariant variant() const { return variant_; }
  const SgSystem& system() const { return sg_; }
  const SparseLdlt& stiffness_factor() const { return kbar_; }
  const std::vector<double>& trace_ratios() const { return ratios_; }
  /// The stochastic matrix of K_hat (identity for the mean-based variant).
  const DenseMatrix& G() const { return g_; }

  /// In-place block inverses on node-major blocks and boundary vectors.
  void apply_mass_inverse(RowMatrix& v) const;
  void apply_control_inverse(Vector& v) const;
  void apply_khat_inverse(RowMatrix& v) const;
  /// K_hat^-1 (I (x) M_II) K_hat^-1 v.
  void apply_schur_hat_inverse(RowMatrix& v) const;

  /// Single right-hand-side solves with Kbar_II and with G since the last reset.
  std::uint64_t stiffness_solves() const { return kbar_.solve_count(); }
  std::uint64_t g_solves() const { return g_solves_; }
  void reset_counters() const;

 private:
  const SgSystem& sg_;
  PreconditionerVariant variant_;
  SparseLdlt kbar_;
  SparseLdlt mass_;
  Eigen::LLT<DenseMatrix> control_;
  DenseMatrix g_;
  Eigen::LLT<DenseMatrix> g_llt_;
  std::vector<double> ratios_;
  mutable std::uint64_t g_solves_ = 0;
};

}  // namespace sgbc
