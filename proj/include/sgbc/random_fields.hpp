#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "sgbc/common.hpp"

namespace sgbc {

/// Spatial point; 1D problems use only the first coordinate.
using Point = std::array<double, 2>;
using ScalarField = std::function<double(const Point&)>;

/// Separable exponential covariance
///   C(x, y) = kappa^2 prod_k exp(-|x_k - y_k| / ell_k)
/// on the box [lower_k, upper_k].
struct ExponentialCovariance {
  std::vector<double> correlation_lengths;
  double std_dev = 1.0;
  std::vector<double> lower;
  std::vector<double> upper;

  int dimension() const { return static_cast<int>(correlation_lengths.size()); }
  double operator()(const Point& x, const Point& y) const;
  void validate() const;
};

/// Eigenpair of the 1D correlation kernel exp(-|x-y|/ell) on [lower, upper].
/// The eigenvalue is that of the unit-variance kernel; the covariance
/// operator has eigenvalue kappa^2 * lambda.
struct EigenPair1D {
  double lambda = 0.0;
  double frequency = 0.0;  // omega in cos/sin(omega (x - center))
  bool even = true;
  double center = 0.0;
  double norm = 1.0;  // eigenfunction = trig(omega (x - center)) / norm

  double operator()(double x) const;
};

/// First `count` eigenpairs of exp(-|x-y|/ell) on [lower, upper], sorted by
/// decreasing eigenvalue. Frequencies are the roots of
///   even: omega tan(omega A) = 1/ell,  odd: omega + tan(omega A)/ell = 0
/// with A the half length, each bracketed between consecutive singularities
/// and bisected to 1e-14.
std::vector<EigenPair1D> solve_1d_eigenpairs(double ell, double lower, double upper, int count);

/// Tensor-product eigenpair lambda = prod lambda_i, w(x) = prod w_i(x_i).
struct EigenPair {
  double lambda = 0.0;
  std::vector<EigenPair1D> factors;
  std::vector<int> factor_index;  // position of each factor in its 1D list

  double operator()(const Point& x) const;
};

/// Sorted top-`count` products of two 1D eigen-sequences. Throws Error when
/// the candidate lists are too short to certify the selection.
std::vector<EigenPair> tensorize_2d(const std::vector<EigenPair1D>& pairs_x,
                                    const std::vector<EigenPair1D>& pairs_y, int count);

/// Number of 1D pairs requested per axis before tensorizing to `count`.
int candidates_per_axis(int count);

/// The `count` leading eigenpairs of the covariance operator with kernel C
/// itself, so lambda includes the factor kappa^2 and sum_k lambda_k <= kappa^2 |D|.
std::vector<EigenPair> exponential_eigenpairs(const ExponentialCovariance& cov, int count);

/// Truncated Karhunen-Loeve field
///   z(x, xi) = mean(x) + kappa sum_k sqrt(lambda_k) w_k(x) xi_k
/// with (lambda_k, w_k) as passed in. With the pairs of exponential_eigenpairs
/// this applies kappa on top of the covariance eigenvalues, so the modes
/// scale with kappa^2 (see README, field conventions).
class KlField {
 public:
  KlField() = default;
  KlField(ScalarField mean, double std_dev, std::vector<EigenPair> pairs);
  /// Deterministic field: no modes.
  static KlField constant(ScalarField mean);

  int modes() const { return static_cast<int>(pairs_.size()); }
  double std_dev() const { return std_dev_; }
  const std::vector<EigenPair>& pairs() const { return pairs_; }

  double mean(const Point& x) const { return mean_ ? mean_(x) : 0.0; }
  /// a_k(x) = kappa sqrt(lambda_k) w_k(x), k is 0-based.
  double mode(int k, const Point& x) const;
  ScalarField mode_function(int k) const;
  ScalarField mean_function() const;

  /// Requires xi.size() >= modes(); extra coordinates are ignored.
  double evaluate(std::span<const double> xi, const Point& x) const;

  /// Pointwise variance sum_k mode_k(x)^2.
  double variance(const Point& x) const;

 private:
  ScalarField mean_;
  double std_dev_ = 0.0;
  std::vector<EigenPair> pairs_;
};

struct PositivityBounds {
  double conservative_min = 0.0;  // min mean - sqrt(3) sum_k max|a_k|
  double conservative_max = 0.0;
  double sharp_min = 0.0;         // min over grid of mean(x) - sqrt(3) sum_k |a_k(x)|
  double sharp_max = 0.0;
  bool positive = false;          // sharp_min > 0
};

/// Bounds of z over Gamma x D, sampled on a uniform grid of `resolution`
/// intervals per axis of the box [lower, upper]. The field is affine in xi,
/// so its extremes over Gamma at fixed x sit at corners and are available in
/// closed form.
PositivityBounds field_bounds(const KlField& field, std::span<const double> lower,
                              std::span<const double> upper, int resolution);

/// field_bounds plus rejection: throws NumericalError when sharp_min <= 0.
PositivityBounds check_positivity(const KlField& field, std::span<const double> lower,
                                  std::span<const double> upper, int resolution);

/// Brownian-bridge boundary noise b(s, xi) = sum_k sqrt(2)/(k pi) sin(k pi s) xi_k
/// in the normalized arclength s in [0, 1].
class BoundaryNoise {
 public:
  BoundaryNoise() = default;
  explicit BoundaryNoise(std::vector<std::function<double(double)>> modes);

  int modes() const { return static_cast<int>(modes_.size()); }
  double mode(int k, double s) const { return modes_.at(static_cast<std::size_t>(k))(s); }
  const std::function<double(double)>& mode_function(int k) const {
    return modes_.at(static_cast<std::size_t>(k));
  }

 private:
  std::vector<std::function<double(double)>> modes_;
};

BoundaryNoise brownian_bridge_modes(int count);

}  // namespace sgbc
