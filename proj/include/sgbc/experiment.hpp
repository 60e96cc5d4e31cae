#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgbc/config.hpp"
#include "sgbc/fem.hpp"
#include "sgbc/krylov.hpp"
#include "sgbc/mesh.hpp"
#include "sgbc/pdas.hpp"
#include "sgbc/preconditioner.hpp"
#include "sgbc/random_fields.hpp"
#include "sgbc/sg_system.hpp"
#include "sgbc/stochastic_basis.hpp"

// Configuration-driven convergence studies: every (level, Q) cell is solved
// and compared against a reference solution on a finer nested mesh with a
// larger chaos degree.

namespace sgbc {

/// Nested meshes of one family; levels[l] is refinement level l and every
/// mesh descends from the finer ones' parent chain.
struct MeshFamily {
  std::vector<MeshPtr> levels;

  const MeshPtr& at(int level) const;
};

/// Meshes of levels 0..finest (interval level l has h = 2^-l).
MeshFamily build_mesh_family(const std::string& domain, int finest);

/// Smallest eigenvalue range of the Galerkin coefficient matrix
/// mean(x) I + sum_k a_k(x) P_k over a sampling grid. Positive minimum means
/// the stochastic stiffness is coercive even where pointwise samples of the
/// field are not positive.
struct GalerkinBounds {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};
GalerkinBounds galerkin_coefficient_bounds(const KlField& field, const GpcBasis& basis, int dim, int resolution);

struct ProblemFields {
  KlField diffusion;
  KlField source;
  ScalarField desired_state;
  BoundaryNoise noise;  // empty when the boundary data is deterministic
  PositivityBounds positivity;
};

/// Builds the fields named in the config and applies the positivity policy:
/// "enforce" throws when the sharp pointwise minimum of the diffusion is not
/// positive, "warn" writes a note to `log` (if given).
ProblemFields build_fields(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Everything needed to solve one (mesh, Q) cell.
class Discretization {
 public:
  Discretization(const ExperimentConfig& config, const ProblemFields& fields, MeshPtr mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  const GpcBasis& basis() const { return basis_; }
  const SgSystem& system() const { return sg_; }
  const SparseMatrix& mass() const { return mass_; }
  int degree() const { return basis_.degree(); }

 private:
  MeshPtr mesh_;
  GpcBasis basis_;
  SparseMatrix mass_;
  SgSystem sg_;
};

struct CellSolution {
  RowMatrix y0;
  Vector u;
  RowMatrix p;
  Vector lambda;  // empty for unconstrained solves
};

struct CellResult {
  int level = 0;
  double h = 0.0;
  int degree = 0;
  Index n_modes = 0;
  Index unknowns = 0;
  std::string variant;
  bool constrained = false;
  int iterations = 0;  // MINRES (unconstrained or PDAS start)
  double relative_residual = 0.0;
  bool converged = false;
  std::string status;
  std::vector<double> history;
  int pdas_outer = 0;
  int pdas_inner_total = 0;
  double complementarity = 0.0;
  std::vector<PdasLogEntry> pdas_log;
  double objective = 0.0;
  double max_control = 0.0;
  double state_error = -1.0;  // -1 until compared with a reference
  double control_error = -1.0;
  double seconds = 0.0;
};

struct SolveOutcome {
  CellResult result;
  CellSolution solution;
};

/// Solves one cell: MINRES on the saddle system, or PDAS when the config has
/// bounds. `variant` overrides the configured preconditioner.
SolveOutcome solve_cell(const ExperimentConfig& config, const Discretization& disc,
                        std::optional<PreconditionerVariant> variant = std::nullopt);

/// Dof-indexed state over the whole mesh, n_vertices x n_modes: y0 on the
/// interior, u in mode 1 and the noise coefficients in modes 2..N+1 on the
/// boundary.
RowMatrix full_state(const SgSystem& sg, const RowMatrix& y0, const Vector& u);

/// ||y_ref - y||_{L2(Gamma; L2(D))}: prolongation to the reference mesh,
/// zero padding of the chaos modes, reference mass matrix and Parseval.
double state_error(const Discretization& run, const CellSolution& sol, const Discretization& ref,
                   const CellSolution& ref_sol);

/// ||u_ref - u||_{L2(dD)} with the reference boundary mass.
double control_error(const Mesh& run_mesh, const Vector& u, const Mesh& ref_mesh, const Vector& u_ref,
                     const SparseMatrix& ref_boundary_mass);

/// Least-squares slope of log(error) against log(h). Throws Error with fewer
/// than 3 points or a non-positive entry.
double fit_slope(const std::vector<double>& h, const std::vector<double>& errors);

struct SlopeFit {
  double slope = 0.0;
  bool valid = false;
  std::vector<double> h_used;
  double contamination = 0.0;
  std::string note;
};

/// Slope over the finest 3 levels whose error exceeds 10x the reference
/// contamination estimate. The estimate is the finest level's error times
/// (h_ref / h_finest)^p, with p the slope fitted over all levels, which is
/// the size of the reference's own error under the observed rate.
SlopeFit fit_finest_slope(const std::vector<double>& h, const std::vector<double>& errors, double h_ref);

struct ConvergenceReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  CellResult reference;
  GalerkinBounds galerkin;
  PositivityBounds positivity;
  std::vector<std::pair<int, SlopeFit>> state_slopes;    // per degree
  std::vector<std::pair<int, SlopeFit>> control_slopes;  // per degree
  bool all_converged = true;
};

struct RunOptions {
  std::optional<PreconditionerVariant> variant;
  std::ostream* log = nullptr;
};

/// All cells of the config plus errors against the reference. Solver
/// failures are recorded in the cells and clear all_converged.
ConvergenceReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// errors_vs_h.csv, iterations.csv, pdas_log.csv, slopes.csv,
/// residuals/*.csv and manifest.json in `dir` (created if missing).
void emit_reports(const ConvergenceReport& report, const std::string& dir);

/// Mesh size of a level in the config's domain.
double level_h(int level);

}  // namespace sgbc
