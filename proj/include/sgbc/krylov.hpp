#pragma once

#include <string>
#include <vector>

#include "sgbc/common.hpp"

namespace sgbc {

enum class KrylovStatus { converged, max_iterations, breakdown };

std::string status_name(KrylovStatus s);

struct KrylovReport {
  int iterations = 0;
  double relative_residual = 0.0;
  KrylovStatus status = KrylovStatus::max_iterations;
  std::vector<double> history;  // relative residual after each iteration, history[0] = 1
  std::string message;

  bool converged() const { return status == KrylovStatus::converged; }
};

struct KrylovSettings {
  double tol = 1e-10;
  int maxit = 1000;
};

/// Preconditioned MINRES for symmetric A with symmetric positive definite P
/// (P applies the preconditioner inverse). Stops when the recurrence estimate
/// of the P-norm residual, relative to its initial value, drops below tol.
/// x holds the initial guess on entry.
KrylovReport minres(const LinearOperator& a, const Vector& b, const LinearOperator& p, Vector& x,
                    const KrylovSettings& settings = {});

/// Right-preconditioned BiCGstab; stops when ||b - A x|| <= tol ||b||
/// (recursive residual, confirmed by an explicit residual at exit).
KrylovReport bicgstab(const LinearOperator& a, const Vector& b, const LinearOperator& p, Vector& x,
                      const KrylovSettings& settings = {1e-8, 1000});

}  // namespace sgbc
