#include "sgbc/krylov.hpp"

#include <cmath>
#include <limits>

#include "sgbc/vector_ops.hpp"

namespace sgbc {

std::string status_name(KrylovStatus s) {
  switch (s) {
    case KrylovStatus::converged:
      return "converged";
    case KrylovStatus::max_iterations:
      return "max_iterations";
    case KrylovStatus::breakdown:
      return "breakdown";
  }
  return "unknown";
}

KrylovReport minres(const LinearOperator& a, const Vector& b, const LinearOperator& p, Vector& x,
                    const KrylovSettings& settings) {
  const Index n = a.size();
  if (b.size() != n || p.size() != n) throw DimensionError("minres: operator and vector sizes differ");
  if (x.size() != n) x = Vector::Zero(n);
  KrylovReport report;
  report.history.push_back(1.0);

  Vector v(n);
  a.apply(x, v);
  v = b - v;
  Vector z;
  p.apply(v, z);
  double gamma = vec::dot(z, v);
  if (gamma < 0.0 || !std::isfinite(gamma)) {
    report.status = KrylovStatus::breakdown;
    report.message = "preconditioner is not positive definite";
    return report;
  }
  gamma = std::sqrt(gamma);
  if (gamma == 0.0) {
    report.status = KrylovStatus::converged;
    return report;
  }
  const double eta0 = gamma;
  double eta = gamma;
  double gamma_old = 1.0;
  double c = 1.0, c_old = 1.0, s = 0.0, s_old = 0.0;
  Vector v_old = Vector::Zero(n);
  Vector w = Vector::Zero(n), w_old = Vector::Zero(n);
  Vector az(n), v_new(n), z_new(n), w_new(n);

  for (int it = 1; it <= settings.maxit; ++it) {
    z /= gamma;
    a.apply(z, az);
    const double delta = vec::dot(az, z);
    // v_new = A z - (delta / gamma) v - (gamma / gamma_old) v_old
    v_new = az;
    vec::axpy(-delta / gamma, v, v_new);
    vec::axpy(-gamma / gamma_old, v_old, v_new);
    p.apply(v_new, z_new);
    double gamma_new = vec::dot(z_new, v_new);
    if (gamma_new < 0.0 || !std::isfinite(gamma_new)) {
      report.status = KrylovStatus::breakdown;
      report.message = "preconditioner is not positive definite";
      report.iterations = it - 1;
      return report;
    }
    gamma_new = std::sqrt(gamma_new);

    const double a0 = c * delta - c_old * s * gamma;
    const double a1 = std::hypot(a0, gamma_new);
    const double a2 = s * delta + c_old * c * gamma;
    const double a3 = s_old * gamma;
    if (a1 == 0.0) {
      report.status = KrylovStatus::breakdown;
      report.message = "singular tridiagonal system";
      report.iterations = it - 1;
      return report;
    }
    const double c_new = a0 / a1;
    const double s_new = gamma_new / a1;
    // w_new = (z - a3 w_old - a2 w) / a1
    w_new = z;
    vec::axpy(-a3, w_old, w_new);
    vec::axpy(-a2, w, w_new);
    w_new /= a1;
    vec::axpy(c_new * eta, w_new, x);
    eta = -s_new * eta;

    report.iterations = it;
    report.relative_residual = std::abs(eta) / eta0;
    report.history.push_back(report.relative_residual);
    if (report.relative_residual <= settings.tol) {
      report.status = KrylovStatus::converged;
      return report;
    }
    if (gamma_new == 0.0) {
      // Invariant subspace reached without meeting the tolerance.
      report.status = KrylovStatus::breakdown;
      report.message = "zero Lanczos coefficient";
      return report;
    }
    v_old.swap(v);
    v.swap(v_new);
    z.swap(z_new);
    w_old.swap(w);
    w.swap(w_new);
    gamma_old = gamma;
    gamma = gamma_new;
    c_old = c;
    c = c_new;
    s_old = s;
    s = s_new;
  }
  report.status = KrylovStatus::max_iterations;
  return report;
}

KrylovReport bicgstab(const LinearOperator& a, const Vector& b, const LinearOperator& p, Vector& x,
                      const KrylovSettings& settings) {
  const Index n = a.size();
  if (b.size() != n || p.size() != n) throw DimensionError("bicgstab: operator and vector sizes differ");
  if (x.size() != n) x = Vector::Zero(n);
  KrylovReport report;
  const double bnorm = vec::norm(b);
  if (bnorm == 0.0) {
    x.setZero();
    report.status = KrylovStatus::converged;
    report.history.push_back(0.0);
    return report;
  }
  Vector r(n);
  a.apply(x, r);
  r = b - r;
  report.relative_residual = vec::norm(r) / bnorm;
  report.history.push_back(report.relative_residual);
  if (report.relative_residual <= settings.tol) {
    report.status = KrylovStatus::converged;
    return report;
  }
  const Vector rhat = r;
  const double tiny = std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon();
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  Vector v = Vector::Zero(n), d = Vector::Zero(n);
  Vector dhat(n), s(n), shat(n), t(n);

  auto finish = [&](KrylovStatus status) {
    Vector ax(n);
    a.apply(x, ax);
    report.relative_residual = vec::norm(b - ax) / bnorm;
    report.status = status;
    if (status == KrylovStatus::converged && report.relative_residual > 10.0 * settings.tol) {
      report.status = KrylovStatus::breakdown;
      report.message = "recursive residual drifted from the true residual";
    }
    return report;
  };

  for (int it = 1; it <= settings.maxit; ++it) {
    const double rho_new = vec::dot(rhat, r);
    if (std::abs(rho_new) <= tiny * bnorm * bnorm) {
      report.message = "rho breakdown";
      return finish(KrylovStatus::breakdown);
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    // d = r + beta (d - omega v)
    vec::axpy(-omega, v, d);
    vec::axpby(1.0, r, beta, d);
    p.apply(d, dhat);
    a.apply(dhat, v);
    const double rv = vec::dot(rhat, v);
    if (rv == 0.0 || !std::isfinite(rv)) {
      report.message = "rho breakdown";
      return finish(KrylovStatus::breakdown);
    }
    alpha = rho / rv;
    s = r;
    vec::axpy(-alpha, v, s);
    report.iterations = it;
    const double snorm = vec::norm(s);
    if (snorm <= settings.tol * bnorm) {
      vec::axpy(alpha, dhat, x);
      report.history.push_back(snorm / bnorm);
      return finish(KrylovStatus::converged);
    }
    p.apply(s, shat);
    a.apply(shat, t);
    const double tt = vec::dot(t, t);
    omega = tt > 0.0 ? vec::dot(t, s) / tt : 0.0;
    if (omega == 0.0 || !std::isfinite(omega)) {
      vec::axpy(alpha, dhat, x);
      report.message = "omega breakdown";
      return finish(KrylovStatus::breakdown);
    }
    vec::axpy(alpha, dhat, x);
    vec::axpy(omega, shat, x);
    r = s;
    vec::axpy(-omega, t, r);
    const double rel = vec::norm(r) / bnorm;
    report.history.push_back(rel);
    if (rel <= settings.tol) return finish(KrylovStatus::converged);
  }
  return finish(KrylovStatus::max_iterations);
}

}  // namespace sgbc
