#pragma once

#include <functional>
#include <vector>

#include "sgbc/common.hpp"
#include "sgbc/mesh.hpp"
#include "sgbc/random_fields.hpp"

// P1 finite elements on a Mesh. All matrices and vectors are indexed by dof
// (interior first), so the II/IB/BI/BB blocks are contiguous index ranges.

namespace sgbc {

enum class Part { interior, boundary };

/// Contiguous [offset, offset + size) range of a dof part.
struct DofRange {
  Index offset = 0;
  Index size = 0;
};

DofRange dof_range(const Mesh& mesh, Part part);

/// Sub-block of a dof-indexed matrix, e.g. sub_block(mesh, K, interior, boundary) = K_IB.
SparseMatrix sub_block(const Mesh& mesh, const SparseMatrix& m, Part rows, Part cols);

/// Stiffness with the coefficient sampled at element centroids.
SparseMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& coeff);

/// Exact P1 mass matrix.
SparseMatrix assemble_mass(const Mesh& mesh);

/// Boundary mass over the boundary dofs (n_boundary x n_boundary). On the
/// interval the boundary is two points and the matrix is the identity.
SparseMatrix assemble_boundary_mass(const Mesh& mesh);

/// Load vector int g phi_m: 2-point Gauss on intervals, 3-point (degree 2)
/// rule on triangles.
Vector assemble_load(const Mesh& mesh, const ScalarField& g);

/// Boundary load int_{dD} g(s) phi_r ds in the arclength parameter, with
/// 3-point Gauss per boundary edge. On the interval: point values at s = 0, 1.
Vector assemble_boundary_load(const Mesh& mesh, const std::function<double(double)>& g);

/// Discrete L2(dD) projection: solves M_dD c = boundary load of g.
Vector project_boundary_field(const Mesh& mesh, const std::function<double(double)>& g);

struct FemMatrices {
  SparseMatrix Kbar;            // stiffness of the mean coefficient
  std::vector<SparseMatrix> K;  // stiffness of each coefficient mode
  SparseMatrix M;               // mass
  SparseMatrix Mboundary;       // boundary mass over boundary dofs
};

struct LoadVectors {
  Vector fbar;
  std::vector<Vector> f;  // one per source mode
  Vector yd;
};

FemMatrices assemble_fem(const Mesh& mesh, const KlField& diffusion);
LoadVectors assemble_loads(const Mesh& mesh, const KlField& source, const ScalarField& desired_state);

}  // namespace sgbc
