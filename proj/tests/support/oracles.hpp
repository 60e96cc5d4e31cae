#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library's numerics, so agreement means two separate
// derivations match.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b] from Newton iteration on the Bonnet
/// recurrence (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}.
inline Rule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : p1;
      const double pm = n == 0 ? 0.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = 0.5 * (b - a) * x + 0.5 * (a + b);
    r.weights[static_cast<std::size_t>(i)] = (b - a) / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

/// Orthonormal polynomials under the uniform density on [-sqrt 3, sqrt 3],
/// built by Gram-Schmidt on the monomials with quadrature inner products.
/// Returns coefficient vectors c_q with psi_q(x) = sum_j c_q[j] x^j.
inline std::vector<std::vector<double>> gram_schmidt_uniform(int max_degree) {
  const double s3 = std::sqrt(3.0);
  const Rule rule = gauss_legendre(max_degree + 2, -s3, s3);
  auto eval = [](const std::vector<double>& c, double x) {
    double v = 0.0, p = 1.0;
    for (double cj : c) {
      v += cj * p;
      p *= x;
    }
    return v;
  };
  auto inner = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * eval(a, rule.nodes[i]) * eval(b, rule.nodes[i]);
    return s / (2.0 * s3);
  };
  std::vector<std::vector<double>> basis;
  for (int q = 0; q <= max_degree; ++q) {
    std::vector<double> c(static_cast<std::size_t>(max_degree) + 1, 0.0);
    c[static_cast<std::size_t>(q)] = 1.0;
    for (const auto& prev : basis) {
      const double proj = inner(c, prev);
      for (std::size_t j = 0; j < c.size(); ++j) c[j] -= proj * prev[j];
    }
    const double nrm = std::sqrt(inner(c, c));
    for (double& cj : c) cj /= nrm;
    basis.push_back(c);
  }
  return basis;
}

inline double poly_eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

/// int_a^b f with composite Gauss-Legendre (pieces panels of order n).
inline double integrate(const std::function<double(double)>& f, double a, double b, int pieces = 64, int n = 10) {
  const Rule ref = gauss_legendre(n);
  double s = 0.0;
  const double w = (b - a) / pieces;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * w;
    for (int i = 0; i < n; ++i)
      s += 0.5 * w * ref.weights[static_cast<std::size_t>(i)] *
           f(lo + 0.5 * w * (ref.nodes[static_cast<std::size_t>(i)] + 1.0));
  }
  return s;
}

/// Column-stacked Kronecker product, vec(X) stacking the columns of X.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

/// Permutation matrix from mode-major (mode blocks of n nodes) to node-major
/// ordering (node blocks of m modes): (P v)[node*m + mode] = v[mode*n + node].
inline Eigen::MatrixXd mode_to_node_major(Eigen::Index nodes, Eigen::Index modes) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(nodes * modes, nodes * modes);
  for (Eigen::Index n = 0; n < nodes; ++n)
    for (Eigen::Index m = 0; m < modes; ++m) p(n * modes + m, m * nodes + n) = 1.0;
  return p;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace oracle
