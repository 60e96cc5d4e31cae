#pragma once

#include <vector>

#include "sgbc/common.hpp"
#include "sgbc/fem.hpp"
#include "sgbc/kronecker.hpp"
#include "sgbc/mesh.hpp"
#include "sgbc/sparse_solver.hpp"
#include "sgbc/stochastic_basis.hpp"

// Stochastic Galerkin discretization of the boundary control problem.
//
// Unknowns are node-major blocks: y0 and p are n_interior x n_modes (row n
// holds the chaos coefficients of interior node n), u is a deterministic
// boundary vector and b is n_boundary x n_noise with column l the boundary
// coefficients of the l-th noise mode (chaos mode l+1).

namespace sgbc {

struct SgSystem {
  Index n_modes = 0;     // N_xi
  Index n_interior = 0;  // N_I
  Index n_boundary = 0;  // N_B
  Index n_noise = 0;     // N, random dimension
  double alpha = 0.0;

  KroneckerSum K_II;    // Pbar (x) Kbar_II + sum_k P_k (x) K_k,II
  KroneckerSum K_IB_u;  // stochastic column 1 of the same sum on the IB block
  KroneckerSum K_IB_b;  // stochastic columns 2..N+1
  KroneckerSum M_II;    // identity (x) M_II

  std::vector<SparseMatrix> P_k;  // stochastic factors of the diffusion modes
  SparseMatrix Kbar_II;  // spatial blocks kept for preconditioning
  std::vector<SparseMatrix> K_k_II;
  SparseMatrix Mspatial_II;
  SparseMatrix M_IB;
  SparseMatrix M_BB;
  SparseMatrix Mboundary;

  RowMatrix f_I;   // n_interior x n_modes
  RowMatrix yd_I;  // n_interior x n_modes, only mode 1 is non-zero
  Vector yd_B;
  RowMatrix b;     // n_boundary x n_noise

  Index block_size() const { return n_interior * n_modes; }
  /// y0, u, p stacked.
  Index saddle_size() const { return 2 * block_size() + n_boundary; }
  /// M_BB + alpha M_dD, the control block of the saddle system.
  DenseMatrix control_block() const;
};

struct SgInputs {
  const Mesh* mesh = nullptr;
  const GpcBasis* basis = nullptr;
  const FemMatrices* fem = nullptr;
  const LoadVectors* loads = nullptr;
  RowMatrix noise;  // n_boundary x (noise modes <= N); empty for none
  double alpha = 0.0;
};

SgSystem assemble_sg_system(const SgInputs& in);

/// The noise coefficients of a boundary expansion, one column per mode.
RowMatrix project_boundary_noise(const Mesh& mesh, const BoundaryNoise& noise);

/// Flat saddle vector [y0; u; p] and its parts.
struct SaddleParts {
  RowMatrix y0;
  Vector u;
  RowMatrix p;
};
Vector pack(const SgSystem& sg, const SaddleParts& parts);
SaddleParts unpack(const SgSystem& sg, const Vector& x);

/// Symmetric indefinite KKT operator
///   [ M_II       M_IB^u          K_II^T   ] [y0]
///   [ M_BI^u     M_BB + a M_dD   K_BI^u   ] [u ]
///   [ K_II       K_IB^u          0        ] [p ]
class SaddleOperator final : public LinearOperator {
 public:
  explicit SaddleOperator(const SgSystem& sg);
  Index size() const override { return sg_.saddle_size(); }
  void apply(const Vector& x, Vector& y) const override;

 private:
  const SgSystem& sg_;
  DenseMatrix control_;
};

/// [yd_I - M_IB^b b; yd_B; f_I - K_IB^b b]
Vector saddle_rhs(const SgSystem& sg);

/// Discrete objective without the terms that only involve b.
double evaluate_objective(const SgSystem& sg, const RowMatrix& y0, const Vector& u);

/// Right-hand side of the state equation K_II y0 = f_I - K_IB^b b - K_IB^u u.
RowMatrix state_rhs(const SgSystem& sg, const Vector& u);

struct InnerSolveSettings {
  double tol = 1e-12;
  int maxit = 2000;
};

/// Solves K_II X = R by conjugate gradients preconditioned with the mean
/// stiffness. Returns the iteration count; throws NumericalError on failure.
int solve_stiffness(const SgSystem& sg, const SparseLdlt& kbar, const RowMatrix& r, RowMatrix& x,
                    const InnerSolveSettings& settings = {});

struct ReducedGradient {
  Vector gradient;
  RowMatrix y0;
  RowMatrix p;
  int state_iterations = 0;
  int adjoint_iterations = 0;
};

/// Gradient of u -> J(y0(u), u) by one state and one adjoint solve.
ReducedGradient reduced_gradient(const SgSystem& sg, const SparseLdlt& kbar, const Vector& u,
                                 const InnerSolveSettings& settings = {});

struct MeanVariance {
  Vector mean;      // dof-indexed over the whole mesh
  Vector variance;
};

/// Pointwise mean and variance of y = y0 on interior nodes and u + b on the
/// boundary, using mode 1 for the mean and the sum of squared higher modes
/// for the variance.
MeanVariance expectation_and_variance(const SgSystem& sg, const RowMatrix& y0, const Vector& u);

}  // namespace sgbc
