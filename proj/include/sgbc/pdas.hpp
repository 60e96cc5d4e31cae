#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sgbc/common.hpp"
#include "sgbc/krylov.hpp"
#include "sgbc/preconditioner.hpp"
#include "sgbc/sg_system.hpp"

// Primal-dual active set method for u_a <= u <= u_b on the boundary control.
// The multiplier is lambda = lambda_b - lambda_a, so lambda <= 0 where the
// lower bound is active and lambda >= 0 where the upper bound is active.

namespace sgbc {

struct BoxBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  void validate() const;
};

struct ActiveSets {
  std::vector<int> lower;     // A_a
  std::vector<int> upper;     // A_b
  std::vector<int> inactive;  // I

  std::size_t active_count() const { return lower.size() + upper.size(); }
  bool operator==(const ActiveSets&) const = default;
};

/// A_a = {j : lambda_j - sigma (u_a - u_j) < 0}, A_b = {j : lambda_j + sigma (u_j - u_b) > 0},
/// I = the rest. Equality counts as inactive. An index in both sets (possible
/// only for u_a = u_b) goes to A_b.
ActiveSets compute_active_sets(const Vector& u, const Vector& lambda, const BoxBounds& bounds, double sigma);

/// lambda - max{0, lambda + sigma (u - u_b)} - min{0, lambda - sigma (u_a - u)}, componentwise.
Vector complementarity_residual(const Vector& u, const Vector& lambda, const BoxBounds& bounds, double sigma);

/// Symmetrized active-set KKT system on [y0; u; p; lambda_A] (lambda_A ordered
/// as sets.lower then sets.upper): the saddle operator plus E_A lambda_A in the
/// control row and the row E_A^T u = bounds on A.
class PdasOperator final : public LinearOperator {
 public:
  PdasOperator(const SgSystem& sg, const ActiveSets& sets);
  Index size() const override { return saddle_.size() + static_cast<Index>(active_.size()); }
  void apply(const Vector& x, Vector& y) const override;
  const std::vector<int>& active() const { return active_; }

 private:
  const SgSystem& sg_;
  SaddleOperator saddle_;
  std::vector<int> active_;
};

Vector pdas_rhs(const SgSystem& sg, const ActiveSets& sets, const BoxBounds& bounds);

/// Unsymmetrized system on [y0; u; p; lambda] with the last block row
///   sigma (I_Aa + I_Ab) u + I_I lambda = sigma (chi_Aa u_a + chi_Ab u_b).
class PdasFullOperator final : public LinearOperator {
 public:
  PdasFullOperator(const SgSystem& sg, const ActiveSets& sets, double sigma);
  Index size() const override { return saddle_.size() + sg_.n_boundary; }
  void apply(const Vector& x, Vector& y) const override;

 private:
  const SgSystem& sg_;
  SaddleOperator saddle_;
  std::vector<char> is_active_;
  double sigma_;
};

Vector pdas_full_rhs(const SgSystem& sg, const ActiveSets& sets, const BoxBounds& bounds, double sigma);

/// Block preconditioner diag(I (x) M_II, C, S_hat) with the control block
/// C = [S_M E_A; E_A^T 0] inverted exactly, so active rows see the bound
/// constraint directly.
class PdasPreconditioner final : public LinearOperator {
 public:
  PdasPreconditioner(const BlockPreconditioner& base, const ActiveSets& sets);
  Index size() const override { return size_; }
  void apply(const Vector& x, Vector& y) const override;

 private:
  const BlockPreconditioner& base_;
  Index size_;
  Eigen::PartialPivLU<DenseMatrix> control_;
};

struct PdasSettings {
  double sigma = 0.0;  // <= 0 selects sigma = alpha
  int max_outer = 50;
  KrylovSettings inner{1e-8, 1000};
  KrylovSettings initial{1e-10, 1000};  // unconstrained start
};

struct PdasLogEntry {
  int iteration = 0;
  std::size_t lower_active = 0;
  std::size_t upper_active = 0;
  int inner_iterations = 0;
  double inner_residual = 0.0;
  double objective = 0.0;
  std::size_t set_changes = 0;
};

struct PdasResult {
  RowMatrix y0;
  Vector u;
  RowMatrix p;
  Vector lambda;
  ActiveSets sets;
  double sigma = 0.0;
  int outer_iterations = 0;
  bool converged = false;
  std::string message;
  double complementarity = 0.0;  // max-norm of the residual above
  int initial_iterations = 0;
  std::vector<PdasLogEntry> log;
};

/// Algorithm: start from the unconstrained solution with lambda = 0, then
/// alternate active-set updates and BiCGstab solves of the symmetrized system
/// until the sets repeat. Active control entries are set exactly to their
/// bound at the end.
PdasResult pdas_solve(const SgSystem& sg, const BlockPreconditioner& preconditioner, const BoxBounds& bounds,
                      const PdasSettings& settings = {});

}  // namespace sgbc
