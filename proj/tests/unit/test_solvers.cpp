#include <doctest.h>

#include <random>

#include <Eigen/SparseCholesky>

#include "../support/oracles.hpp"
#include "../support/problems.hpp"
#include "sgbc/krylov.hpp"
#include "sgbc/preconditioner.hpp"
#include "sgbc/sparse_solver.hpp"

using namespace sgbc;

namespace {

DenseMatrix random_orthogonal(Index n, std::mt19937_64& rng) {
  DenseMatrix a(n, n);
  for (Index j = 0; j < n; ++j) a.col(j) = oracle::random_vector(n, rng);
  return Eigen::HouseholderQR<DenseMatrix>(a).householderQ();
}

}  // namespace

TEST_CASE("MINRES on the identity converges in one step") {
  std::mt19937_64 rng(5);
  const Vector b = oracle::random_vector(20, rng);
  const IdentityOperator id(20);
  Vector x;
  const KrylovReport rep = minres(id, b, id, x);
  CHECK(rep.converged());
  CHECK(rep.iterations == 1);
  CHECK((x - b).norm() < 1e-14);
  CHECK(rep.history.front() == 1.0);
}

TEST_CASE("MINRES terminates after two steps for two distinct eigenvalues") {
  std::mt19937_64 rng(6);
  const Index n = 30;
  const DenseMatrix q = random_orthogonal(n, rng);
  Vector d(n);
  for (Index i = 0; i < n; ++i) d[i] = i % 2 ? 3.0 : -0.5;
  const DenseMatrix a = q * d.asDiagonal() * q.transpose();
  const Vector b = oracle::random_vector(n, rng);
  const MatrixOperator<DenseMatrix> op(a);
  Vector x;
  const KrylovReport rep = minres(op, b, IdentityOperator(n), x, {1e-12, 50});
  CHECK(rep.converged());
  CHECK(rep.iterations == 2);
  CHECK((a * x - b).norm() < 1e-10 * b.norm());
}

TEST_CASE("preconditioned MINRES and BiCGstab agree with dense solves") {
  std::mt19937_64 rng(8);
  const Index n = 40;
  const DenseMatrix q = random_orthogonal(n, rng);
  Vector d(n);
  for (Index i = 0; i < n; ++i) d[i] = (i % 3 ? 1.0 : -1.0) * (1.0 + i);
  const DenseMatrix a = q * d.asDiagonal() * q.transpose();
  const DenseMatrix pinv = q * d.cwiseAbs().cwiseInverse().asDiagonal() * q.transpose();
  const Vector b = oracle::random_vector(n, rng);
  const Vector exact = a.fullPivLu().solve(b);

  const MatrixOperator<DenseMatrix> op(a), prec(pinv);
  Vector x;
  const KrylovReport rep = minres(op, b, prec, x, {1e-12, 200});
  CHECK(rep.converged());
  CHECK((x - exact).norm() < 1e-9 * exact.norm());
  // |A| as preconditioner leaves the eigenvalues +-1.
  CHECK(rep.iterations <= 3);

  DenseMatrix ns = a + 0.3 * DenseMatrix::Random(n, n);
  const Vector exact2 = ns.fullPivLu().solve(b);
  Vector x2 = Vector::Zero(n);
  const MatrixOperator<DenseMatrix> nop(ns);
  const KrylovReport rep2 = bicgstab(nop, b, IdentityOperator(n), x2, {1e-12, 2000});
  CHECK(rep2.converged());
  CHECK((ns * x2 - b).norm() <= 1e-12 * b.norm() * 1.0001);
  CHECK((x2 - exact2).norm() < 1e-6 * exact2.norm());

  Vector bad;
  CHECK_THROWS_AS(minres(op, Vector::Zero(3), prec, bad), DimensionError);
}

TEST_CASE("Krylov solvers report non-convergence") {
  std::mt19937_64 rng(9);
  const Index n = 50;
  Vector d(n);
  for (Index i = 0; i < n; ++i) d[i] = 1.0 + i;
  const DenseMatrix a = d.asDiagonal();
  const MatrixOperator<DenseMatrix> op(a);
  const Vector b = oracle::random_vector(n, rng);
  Vector x;
  const KrylovReport rep = minres(op, b, IdentityOperator(n), x, {1e-14, 3});
  CHECK_FALSE(rep.converged());
  CHECK(rep.status == KrylovStatus::max_iterations);
  CHECK(rep.iterations == 3);
}

TEST_CASE("sparse LDL^T agrees with Eigen's Cholesky on node-major blocks") {
  for (const MeshPtr& m : {build_interval_mesh(1.0 / 32), build_square_mesh(3)}) {
    const SparseMatrix k = sub_block(*m, assemble_stiffness(*m, [](const Point& p) { return 1.0 + p[0] * p[1] + p[0]; }),
                                     Part::interior, Part::interior);
    const SparseLdlt ldlt(k);
    std::mt19937_64 rng(4);
    RowMatrix b(k.rows(), 7);
    b.reshaped<Eigen::RowMajor>() = oracle::random_vector(b.size(), rng);
    const Eigen::SparseMatrix<double> kc(k);
    const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(kc);
    const DenseMatrix expect = llt.solve(DenseMatrix(b));
    ldlt.reset_count();
    const RowMatrix x = ldlt.solve(b);
    CHECK((DenseMatrix(x) - expect).norm() < 1e-10 * expect.norm());
    CHECK(ldlt.solve_count() == 7);
    const Vector v = b.col(2);
    CHECK((ldlt.solve(v) - expect.col(2)).norm() < 1e-10 * expect.col(2).norm());
  }
  CHECK_THROWS_AS(SparseLdlt(SparseMatrix(3, 4)), DimensionError);
}

TEST_CASE("block preconditioner is symmetric positive definite") {
  testing::Problem pr(testing::small_square(3), build_square_mesh(1), 2);
  for (auto v : {PreconditionerVariant::mean_based, PreconditionerVariant::ullmann}) {
    const BlockPreconditioner p(pr.sg(), v);
    const DenseMatrix m = materialize(p);
    CHECK((m - m.transpose()).norm() < 1e-12 * m.norm());
    CHECK(Eigen::SelfAdjointEigenSolver<DenseMatrix>(0.5 * (m + m.transpose())).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("Schur approximation inverse round trip and solve counts") {
  testing::Problem pr(testing::small_interval(2), build_interval_mesh(1.0 / 16), 3);
  const SgSystem& sg = pr.sg();
  const DenseMatrix kbar(sg.Kbar_II), mass(sg.Mspatial_II);
  std::mt19937_64 rng(12);
  for (auto v : {PreconditionerVariant::mean_based, PreconditionerVariant::ullmann}) {
    const BlockPreconditioner p(sg, v);
    const DenseMatrix g = p.G();
    // Node-major K_hat = kron over (node, mode): X -> Kbar X G^T.
    RowMatrix w(sg.n_interior, sg.n_modes);
    w.reshaped<Eigen::RowMajor>() = oracle::random_vector(w.size(), rng);
    RowMatrix z = w;
    p.reset_counters();
    p.apply_schur_hat_inverse(z);
    if (v == PreconditionerVariant::mean_based) {
      CHECK(p.stiffness_solves() == static_cast<std::uint64_t>(2 * sg.n_modes));
      CHECK(p.g_solves() == 0);
    } else {
      CHECK(p.g_solves() > 0);
    }
    const DenseMatrix kz = kbar * DenseMatrix(z) * g.transpose();
    const DenseMatrix back = kbar * mass.llt().solve(kz) * g.transpose();
    CHECK((back - DenseMatrix(w)).norm() < 1e-9 * DenseMatrix(w).norm());

    RowMatrix y = w;
    p.apply_mass_inverse(y);
    CHECK((mass * DenseMatrix(y) - DenseMatrix(w)).norm() < 1e-10 * DenseMatrix(w).norm());
    Vector c = oracle::random_vector(sg.n_boundary, rng);
    const Vector c0 = c;
    p.apply_control_inverse(c);
    CHECK((sg.control_block() * c - c0).norm() < 1e-12);
  }
}

TEST_CASE("Ullmann matrix from trace ratios") {
  testing::Problem pr(testing::small_interval(2), build_interval_mesh(1.0 / 8), 2);
  const SgSystem& sg = pr.sg();
  const BlockPreconditioner p(sg, PreconditionerVariant::ullmann);
  const DenseMatrix kbar(sg.Kbar_II);
  DenseMatrix g = DenseMatrix::Identity(sg.n_modes, sg.n_modes);
  REQUIRE(p.trace_ratios().size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const DenseMatrix kk(sg.K_k_II[k]);
    const double ratio = (kk.transpose() * kbar).trace() / (kbar.transpose() * kbar).trace();
    CHECK(p.trace_ratios()[k] == doctest::Approx(ratio).epsilon(1e-12));
    g += ratio * DenseMatrix(sg.P_k[k]);
  }
  CHECK((p.G() - g).norm() < 1e-12);
  CHECK((BlockPreconditioner(sg, PreconditionerVariant::mean_based).G() -
         DenseMatrix::Identity(sg.n_modes, sg.n_modes)).norm() == 0.0);

  // Vanishing fluctuation stiffness leaves G = I.
  const Mesh& mesh = pr.disc->mesh();
  FemMatrices fem = assemble_fem(mesh, pr.fields.diffusion);
  for (auto& k : fem.K) k = SparseMatrix(k.rows(), k.cols());
  const LoadVectors loads = assemble_loads(mesh, pr.fields.source, pr.fields.desired_state);
  SgInputs in{&mesh, &pr.disc->basis(), &fem, &loads, {}, sg.alpha};
  const SgSystem flat = assemble_sg_system(in);
  const BlockPreconditioner pf(flat, PreconditionerVariant::ullmann);
  CHECK((pf.G() - DenseMatrix::Identity(flat.n_modes, flat.n_modes)).norm() == 0.0);
}

TEST_CASE("variant names and auto selection") {
  CHECK(parse_variant("mean", 5) == PreconditionerVariant::mean_based);
  CHECK(parse_variant("ullmann", 1) == PreconditionerVariant::ullmann);
  CHECK(parse_variant("auto", 3) == PreconditionerVariant::mean_based);
  CHECK(parse_variant("auto", 4) == PreconditionerVariant::ullmann);
  CHECK_THROWS_AS(parse_variant("jacobi", 1), ConfigError);
  CHECK(variant_name(PreconditionerVariant::ullmann) == "ullmann");
}

TEST_CASE("Ullmann needs fewer iterations than mean-based at high degree") {
  ExperimentConfig c = testing::small_interval(2);
  testing::Problem pr(c, build_interval_mesh(1.0 / 32), 4);
  const SgSystem& sg = pr.sg();
  const SaddleOperator op(sg);
  const Vector rhs = saddle_rhs(sg);
  Vector xm, xu;
  const KrylovReport mean = minres(op, rhs, BlockPreconditioner(sg, PreconditionerVariant::mean_based), xm);
  const KrylovReport ull = minres(op, rhs, BlockPreconditioner(sg, PreconditionerVariant::ullmann), xu);
  REQUIRE(mean.converged());
  REQUIRE(ull.converged());
  MESSAGE("MINRES iterations at Q=4: mean " << mean.iterations << ", ullmann " << ull.iterations);
  CHECK(ull.iterations <= mean.iterations);
  CHECK((xm - xu).norm() < 1e-6 * xm.norm());
}
