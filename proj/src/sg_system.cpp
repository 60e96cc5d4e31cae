#include "sgbc/sg_system.hpp"

#include <cmath>

#include "sgbc/vector_ops.hpp"

namespace sgbc {

namespace {

SparseMatrix columns(const SparseMatrix& s, Index rows, Index first, Index count) {
  SparseMatrix out = s.block(0, first, rows, count);
  out.makeCompressed();
  return out;
}

SparseMatrix identity(Index n) {
  SparseMatrix i(n, n);
  i.setIdentity();
  return i;
}

}  // namespace

DenseMatrix SgSystem::control_block() const {
  return DenseMatrix(M_BB) + alpha * DenseMatrix(Mboundary);
}

SgSystem assemble_sg_system(const SgInputs& in) {
  if (!in.mesh || !in.basis || !in.fem || !in.loads) throw Error("assemble_sg_system: missing inputs");
  const Mesh& mesh = *in.mesh;
  const FemMatrices& fem = *in.fem;
  const LoadVectors& loads = *in.loads;
  if (!(in.alpha > 0.0)) throw ConfigError("regularization parameter alpha must be positive");
  const Index nv = mesh.n_vertices();
  if (fem.Kbar.rows() != nv || fem.M.rows() != nv || loads.fbar.size() != nv || loads.yd.size() != nv)
    throw DimensionError("finite element data does not match the mesh");
  const int n = in.basis->dimension();
  if (static_cast<int>(fem.K.size()) > n || static_cast<int>(loads.f.size()) > n)
    throw DimensionError("field has more modes than the random dimension");
  if (in.noise.size() > 0 && (in.noise.rows() != mesh.n_boundary || in.noise.cols() > n))
    throw DimensionError("boundary noise does not match the mesh or the random dimension");

  SgSystem sg;
  sg.n_modes = in.basis->size();
  sg.n_interior = mesh.n_interior;
  sg.n_boundary = mesh.n_boundary;
  sg.n_noise = n;
  sg.alpha = in.alpha;
  const Index nm = sg.n_modes;

  // The coupling columns 1..N+1 need moments against xi_l even when Q = 0;
  // the degree-1 set extends the degree-0 set as a prefix.
  const StochasticMoments moments = assemble_moments(*in.basis);
  const StochasticMoments coupling =
      in.basis->degree() >= 1 ? moments : assemble_moments(GpcBasis(MultiIndexSet(n, 1)));

  sg.Kbar_II = sub_block(mesh, fem.Kbar, Part::interior, Part::interior);
  const SparseMatrix kbar_ib = sub_block(mesh, fem.Kbar, Part::interior, Part::boundary);
  std::vector<KroneckerSum::Term> kii{{moments.Pbar, sg.Kbar_II}};
  std::vector<KroneckerSum::Term> kibu{{columns(coupling.Pbar, nm, 0, 1), kbar_ib}};
  std::vector<KroneckerSum::Term> kibb{{columns(coupling.Pbar, nm, 1, n), kbar_ib}};
  for (std::size_t k = 0; k < fem.K.size(); ++k) {
    SparseMatrix kk_ii = sub_block(mesh, fem.K[k], Part::interior, Part::interior);
    const SparseMatrix kk_ib = sub_block(mesh, fem.K[k], Part::interior, Part::boundary);
    kii.push_back({moments.P[k], kk_ii});
    kibu.push_back({columns(coupling.P[k], nm, 0, 1), kk_ib});
    kibb.push_back({columns(coupling.P[k], nm, 1, n), kk_ib});
    sg.K_k_II.push_back(std::move(kk_ii));
    sg.P_k.push_back(moments.P[k]);
  }
  sg.K_II = KroneckerSum(std::move(kii));
  sg.K_IB_u = KroneckerSum(std::move(kibu));
  sg.K_IB_b = KroneckerSum(std::move(kibb));

  sg.Mspatial_II = sub_block(mesh, fem.M, Part::interior, Part::interior);
  sg.M_IB = sub_block(mesh, fem.M, Part::interior, Part::boundary);
  sg.M_BB = sub_block(mesh, fem.M, Part::boundary, Part::boundary);
  sg.Mboundary = fem.Mboundary;
  sg.M_II = KroneckerSum({{identity(nm), sg.Mspatial_II}});

  const Index ni = sg.n_interior;
  sg.f_I = RowMatrix::Zero(ni, nm);
  sg.f_I.col(0) = loads.fbar.head(ni);
  for (std::size_t k = 0; k < loads.f.size(); ++k) {
    if (static_cast<Index>(k) + 1 >= nm) break;  // p_k = e_{k+1} lies outside a degree-0 basis
    sg.f_I.col(static_cast<Index>(k) + 1) = loads.f[k].head(ni);
  }
  sg.yd_I = RowMatrix::Zero(ni, nm);
  sg.yd_I.col(0) = loads.yd.head(ni);
  sg.yd_B = loads.yd.tail(sg.n_boundary);
  sg.b = RowMatrix::Zero(sg.n_boundary, n);
  if (in.noise.size() > 0) sg.b.leftCols(in.noise.cols()) = in.noise;
  return sg;
}

RowMatrix project_boundary_noise(const Mesh& mesh, const BoundaryNoise& noise) {
  RowMatrix out(mesh.n_boundary, noise.modes());
  for (int k = 0; k < noise.modes(); ++k) out.col(k) = project_boundary_field(mesh, noise.mode_function(k));
  return out;
}

Vector pack(const SgSystem& sg, const SaddleParts& parts) {
  const Index nb = sg.block_size();
  Vector x(sg.saddle_size());
  x.head(nb) = Eigen::Map<const Vector>(parts.y0.data(), nb);
  x.segment(nb, sg.n_boundary) = parts.u;
  x.tail(nb) = Eigen::Map<const Vector>(parts.p.data(), nb);
  return x;
}

SaddleParts unpack(const SgSystem& sg, const Vector& x) {
  if (x.size() != sg.saddle_size()) throw DimensionError("saddle vector has the wrong length");
  const Index nb = sg.block_size();
  SaddleParts parts;
  parts.y0 = ConstBlockMap(x.data(), sg.n_interior, sg.n_modes);
  parts.u = x.segment(nb, sg.n_boundary);
  parts.p = ConstBlockMap(x.data() + nb + sg.n_boundary, sg.n_interior, sg.n_modes);
  return parts;
}

SaddleOperator::SaddleOperator(const SgSystem& sg) : sg_(sg), control_(sg.control_block()) {}

void SaddleOperator::apply(const Vector& x, Vector& y) const {
  const Index nb = sg_.block_size();
  const Index ni = sg_.n_interior;
  const Index nm = sg_.n_modes;
  const Index nbd = sg_.n_boundary;
  if (x.size() != size()) throw DimensionError("saddle operator: input has the wrong length");
  y.resize(size());
  const double* y0 = x.data();
  const double* p = x.data() + nb + nbd;
  const auto u = x.segment(nb, nbd);
  double* r1 = y.data();
  double* r3 = y.data() + nb + nbd;
  Eigen::Map<const Vector, 0, Eigen::InnerStride<>> y0_mean(y0, ni, Eigen::InnerStride<>(nm));

  // Row 1: M_II y0 + M_IB^u u + K_II p
  sg_.M_II.apply(y0, r1);
  sg_.K_II.apply(p, r1, true);
  Eigen::Map<Vector, 0, Eigen::InnerStride<>>(r1, ni, Eigen::InnerStride<>(nm)) += sg_.M_IB * u;

  // Row 2: M_BI^u y0 + (M_BB + a M_dD) u + K_BI^u p
  Vector r2 = control_ * u;
  r2.noalias() += sg_.M_IB.transpose() * y0_mean;
  Vector kp(nbd);
  sg_.K_IB_u.apply_transpose(p, kp.data());
  r2 += kp;
  y.segment(nb, nbd) = r2;

  // Row 3: K_II y0 + K_IB^u u
  sg_.K_II.apply(y0, r3);
  sg_.K_IB_u.apply(u.eval().data(), r3, true);
}

Vector saddle_rhs(const SgSystem& sg) {
  const Index nb = sg.block_size();
  const Index ni = sg.n_interior;
  const Index nm = sg.n_modes;
  Vector rhs(sg.saddle_size());
  // M_IB^b b puts M_IB b_l into chaos mode l+1.
  RowMatrix r1 = sg.yd_I;
  for (Index l = 0; l < sg.n_noise && l + 1 < nm; ++l) r1.col(l + 1) -= sg.M_IB * sg.b.col(l);
  RowMatrix r3 = sg.f_I;
  RowMatrix kb(ni, nm);
  sg.K_IB_b.apply(sg.b, kb);
  r3 -= kb;
  rhs.head(nb) = Eigen::Map<const Vector>(r1.data(), nb);
  rhs.segment(nb, sg.n_boundary) = sg.yd_B;
  rhs.tail(nb) = Eigen::Map<const Vector>(r3.data(), nb);
  return rhs;
}

double evaluate_objective(const SgSystem& sg, const RowMatrix& y0, const Vector& u) {
  if (y0.rows() != sg.n_interior || y0.cols() != sg.n_modes || u.size() != sg.n_boundary)
    throw DimensionError("objective: argument shapes do not match the system");
  const Index nm = sg.n_modes;
  RowMatrix my(sg.n_interior, nm);
  sg.M_II.apply(y0, my);
  double j = 0.5 * (y0.array() * my.array()).sum();
  j += y0.col(0).dot(sg.M_IB * u);
  for (Index l = 0; l < sg.n_noise && l + 1 < nm; ++l) j += y0.col(l + 1).dot(sg.M_IB * sg.b.col(l));
  j += 0.5 * u.dot(sg.M_BB * u);
  j -= (y0.array() * sg.yd_I.array()).sum();
  j -= u.dot(sg.yd_B);
  j += 0.5 * sg.alpha * u.dot(sg.Mboundary * u);
  return j;
}

RowMatrix state_rhs(const SgSystem& sg, const Vector& u) {
  RowMatrix r = sg.f_I;
  RowMatrix tmp(sg.n_interior, sg.n_modes);
  sg.K_IB_b.apply(sg.b, tmp);
  r -= tmp;
  sg.K_IB_u.apply(u.data(), tmp.data());
  r -= tmp;
  return r;
}

int solve_stiffness(const SgSystem& sg, const SparseLdlt& kbar, const RowMatrix& r, RowMatrix& x,
                    const InnerSolveSettings& settings) {
  const Index n = sg.block_size();
  if (r.rows() != sg.n_interior || r.cols() != sg.n_modes) throw DimensionError("stiffness solve: rhs shape mismatch");
  x = RowMatrix::Zero(sg.n_interior, sg.n_modes);
  const double rnorm0 = r.norm();
  if (rnorm0 == 0.0) return 0;
  RowMatrix res = r;
  RowMatrix z = kbar.solve(res);
  RowMatrix d = z;
  RowMatrix q(sg.n_interior, sg.n_modes);
  Eigen::Map<Vector> resv(res.data(), n), zv(z.data(), n), dv(d.data(), n), qv(q.data(), n), xv(x.data(), n);
  double rz = resv.dot(zv);
  for (int it = 1; it <= settings.maxit; ++it) {
    sg.K_II.apply(d, q);
    const double dq = dv.dot(qv);
    if (!(dq > 0.0)) throw NumericalError("stochastic stiffness is not positive definite");
    const double a = rz / dq;
    xv += a * dv;
    resv -= a * qv;
    if (resv.norm() <= settings.tol * rnorm0) return it;
    kbar.solve_in_place(z = res);
    const double rz_new = resv.dot(zv);
    dv = zv + (rz_new / rz) * dv;
    rz = rz_new;
  }
  throw NumericalError("stiffness solve did not converge in " + std::to_string(settings.maxit) + " iterations");
}

ReducedGradient reduced_gradient(const SgSystem& sg, const SparseLdlt& kbar, const Vector& u,
                                 const InnerSolveSettings& settings) {
  if (u.size() != sg.n_boundary) throw DimensionError("reduced gradient: control has the wrong length");
  ReducedGradient out;
  out.state_iterations = solve_stiffness(sg, kbar, state_rhs(sg, u), out.y0, settings);
  // Adjoint: K_II p = yd_I - M_IB^b b - M_II y0 - M_IB^u u (K_II is symmetric).
  RowMatrix r = sg.yd_I;
  RowMatrix my(sg.n_interior, sg.n_modes);
  sg.M_II.apply(out.y0, my);
  r -= my;
  for (Index l = 0; l < sg.n_noise && l + 1 < sg.n_modes; ++l) r.col(l + 1) -= sg.M_IB * sg.b.col(l);
  r.col(0) -= sg.M_IB * u;
  out.adjoint_iterations = solve_stiffness(sg, kbar, r, out.p, settings);
  Vector kp(sg.n_boundary);
  sg.K_IB_u.apply_transpose(out.p.data(), kp.data());
  out.gradient = sg.control_block() * u + kp + sg.M_IB.transpose() * out.y0.col(0) - sg.yd_B;
  return out;
}

MeanVariance expectation_and_variance(const SgSystem& sg, const RowMatrix& y0, const Vector& u) {
  const Index ni = sg.n_interior;
  const Index nbd = sg.n_boundary;
  MeanVariance mv;
  mv.mean.resize(ni + nbd);
  mv.variance.resize(ni + nbd);
  mv.mean.head(ni) = y0.col(0);
  mv.variance.head(ni) = y0.rightCols(sg.n_modes - 1).rowwise().squaredNorm();
  mv.mean.tail(nbd) = u;
  mv.variance.tail(nbd) = sg.b.rowwise().squaredNorm();
  return mv;
}

}  // namespace sgbc
