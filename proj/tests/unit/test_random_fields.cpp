#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "sgbc/random_fields.hpp"

using namespace sgbc;

namespace {

// Nystrom-style application of the kernel exp(-|x-y|/ell) on [lo, hi]: the
// kink at y = x is handled by splitting the integral there.
double kernel_apply(double ell, double lo, double hi, const std::function<double(double)>& w, double x) {
  auto f = [&](double y) { return std::exp(-std::abs(x - y) / ell) * w(y); };
  double s = 0.0;
  if (x > lo) s += oracle::integrate(f, lo, x, 16, 12);
  if (x < hi) s += oracle::integrate(f, x, hi, 16, 12);
  return s;
}

}  // namespace

TEST_CASE("1D eigenpairs decrease and satisfy the Fredholm equation") {
  for (double ell : {1.0, 0.9, 0.3}) {
    const auto pairs = solve_1d_eigenpairs(ell, 0.0, 1.0, 8);
    REQUIRE(pairs.size() == 8);
    for (std::size_t k = 1; k < pairs.size(); ++k) CHECK(pairs[k].lambda < pairs[k - 1].lambda);
    double sum = 0.0;
    for (const auto& p : pairs) {
      CHECK(p.lambda > 0.0);
      sum += p.lambda;
      double worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double x = (i + 0.5) / 1000.0;
        const double lhs = kernel_apply(ell, 0.0, 1.0, [&](double y) { return p(y); }, x);
        worst = std::max(worst, std::abs(lhs - p.lambda * p(x)));
      }
      CHECK(worst < 1e-8);
      const double nrm = oracle::integrate([&](double y) { return p(y) * p(y); }, 0.0, 1.0);
      CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Trace of the unit-variance kernel over |D| = 1.
    CHECK(sum <= 1.0);
  }
}

TEST_CASE("1D eigenfunctions are mutually orthogonal") {
  const auto pairs = solve_1d_eigenpairs(0.9, 0.0, 1.0, 6);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      CHECK(std::abs(oracle::integrate([&](double y) { return pairs[i](y) * pairs[j](y); }, 0.0, 1.0)) < 1e-12);
}

TEST_CASE("covariance eigenvalues carry kappa squared and bound the trace") {
  ExponentialCovariance cov{{1.0}, 0.5, {0.0}, {1.0}};
  const auto pairs = exponential_eigenpairs(cov, 12);
  const auto unit = solve_1d_eigenpairs(1.0, 0.0, 1.0, 12);
  double sum = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    CHECK(pairs[k].lambda == doctest::Approx(0.25 * unit[k].lambda));
    sum += pairs[k].lambda;
  }
  CHECK(sum <= 0.25);
  CHECK(sum > 0.2);
  // Partial-sum variance never exceeds C(x, x) = kappa^2.
  for (double x : {0.0, 0.2, 0.5, 0.93}) {
    double v = 0.0;
    for (const auto& p : pairs) v += p.lambda * p(Point{x, 0.0}) * p(Point{x, 0.0});
    CHECK(v <= 0.25 + 1e-6);
  }
}

TEST_CASE("tensorized 2D pairs match brute-force product sorting") {
  const int m = 12;
  const auto px = solve_1d_eigenpairs(0.9, 0.0, 1.0, m);
  const auto py = solve_1d_eigenpairs(0.9, 0.0, 1.0, m);
  std::vector<double> all;
  for (const auto& a : px)
    for (const auto& b : py) all.push_back(a.lambda * b.lambda);
  std::sort(all.begin(), all.end(), std::greater<>());
  for (int count : {1, 4, 10, 15}) {
    const auto sel = tensorize_2d(std::vector(px.begin(), px.begin() + candidates_per_axis(count)),
                                  std::vector(py.begin(), py.begin() + candidates_per_axis(count)), count);
    REQUIRE(static_cast<int>(sel.size()) == count);
    for (int k = 0; k < count; ++k) CHECK(sel[static_cast<std::size_t>(k)].lambda == doctest::Approx(all[static_cast<std::size_t>(k)]));
  }
  const auto top = tensorize_2d(px, py, 1);
  CHECK(top[0].lambda == doctest::Approx(px[0].lambda * py[0].lambda));
  CHECK_THROWS(tensorize_2d({px[0]}, {py[0], py[1]}, 3));
}

TEST_CASE("2D eigenfunctions are orthonormal on a tensor grid") {
  ExponentialCovariance cov{{0.9, 0.9}, 0.5, {0.0, 0.0}, {1.0, 1.0}};
  const auto pairs = exponential_eigenpairs(cov, 10);
  const oracle::Rule r = oracle::gauss_legendre(40, 0.0, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i; j < pairs.size(); ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < r.nodes.size(); ++a)
        for (std::size_t b = 0; b < r.nodes.size(); ++b) {
          const Point x{r.nodes[a], r.nodes[b]};
          s += r.weights[a] * r.weights[b] * pairs[i](x) * pairs[j](x);
        }
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("KL field evaluation is affine in xi") {
  ExponentialCovariance cov{{1.0}, 0.5, {0.0}, {1.0}};
  const KlField f([](const Point& x) { return 1.0 + x[0]; }, 0.5, exponential_eigenpairs(cov, 3));
  const Point x{0.37, 0.0};
  const std::vector<double> zero(3, 0.0), xi{0.4, -1.1, 0.9};
  std::vector<double> twice(3);
  for (int k = 0; k < 3; ++k) twice[static_cast<std::size_t>(k)] = 2.0 * xi[static_cast<std::size_t>(k)];
  CHECK(f.evaluate(zero, x) == doctest::Approx(1.37));
  CHECK(f.evaluate(twice, x) - 1.37 == doctest::Approx(2.0 * (f.evaluate(xi, x) - 1.37)));
  for (int k = 0; k < 3; ++k) {
    std::vector<double> e(3, 0.0);
    e[static_cast<std::size_t>(k)] = 1e-3;
    CHECK((f.evaluate(e, x) - f.evaluate(zero, x)) / 1e-3 == doctest::Approx(f.mode(k, x)).epsilon(1e-10));
  }
  double var = 0.0;
  for (int k = 0; k < 3; ++k) var += f.mode(k, x) * f.mode(k, x);
  CHECK(f.variance(x) == doctest::Approx(var));
  CHECK_THROWS_AS(f.evaluate(std::vector<double>{1.0}, x), DimensionError);
}

TEST_CASE("positivity bounds") {
  const std::vector<double> lo{0.0}, hi{1.0};
  const KlField flat = KlField::constant([](const Point&) { return 1.0; });
  const PositivityBounds b0 = check_positivity(flat, lo, hi, 10);
  CHECK(b0.sharp_min == 1.0);
  CHECK(b0.sharp_max == 1.0);

  ExponentialCovariance cov{{1.0}, 0.5, {0.0}, {1.0}};
  const KlField a([](const Point&) { return 1.0; }, 0.5, exponential_eigenpairs(cov, 2));
  const PositivityBounds b = check_positivity(a, lo, hi, 200);
  CHECK(b.conservative_min <= b.sharp_min);
  CHECK(b.sharp_max <= b.conservative_max);
  CHECK(b.positive);
  // Corner search over {+-sqrt 3}^N and the same grid.
  double brute = INFINITY;
  const double s3 = std::sqrt(3.0);
  for (int i = 0; i <= 200; ++i)
    for (double x1 : {-s3, s3})
      for (double x2 : {-s3, s3}) brute = std::min(brute, a.evaluate(std::vector<double>{x1, x2}, Point{i / 200.0, 0.0}));
  CHECK(b.sharp_min == doctest::Approx(brute));

  const KlField bad([](const Point&) { return 0.1; }, 0.5, exponential_eigenpairs(cov, 2));
  CHECK_THROWS_AS(check_positivity(bad, lo, hi, 50), NumericalError);
}

TEST_CASE("Brownian bridge modes") {
  const BoundaryNoise noise = brownian_bridge_modes(5);
  CHECK(noise.modes() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(noise.mode(k, 0.0) == 0.0);
    CHECK(std::abs(noise.mode(k, 1.0)) < 1e-15);
    const double n2 = oracle::integrate([&](double s) { return noise.mode(k, s) * noise.mode(k, s); }, 0.0, 1.0);
    CHECK(std::sqrt(n2) == doctest::Approx(1.0 / ((k + 1) * std::numbers::pi)).epsilon(1e-12));
  }
  CHECK(noise.mode(0, 0.5) == doctest::Approx(std::sqrt(2.0) / std::numbers::pi));
  CHECK_THROWS(brownian_bridge_modes(0));
}
