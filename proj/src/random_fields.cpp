#include "sgbc/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sgbc {

double ExponentialCovariance::operator()(const Point& x, const Point& y) const {
  double value = std_dev * std_dev;
  for (int k = 0; k < dimension(); ++k)
    value *= std::exp(-std::abs(x[static_cast<std::size_t>(k)] - y[static_cast<std::size_t>(k)]) /
                      correlation_lengths[static_cast<std::size_t>(k)]);
  return value;
}

void ExponentialCovariance::validate() const {
  const std::size_t d = correlation_lengths.size();
  if (d < 1 || d > 2) throw ConfigError("exponential covariance supports 1 or 2 dimensions");
  if (lower.size() != d || upper.size() != d) throw ConfigError("covariance box dimension mismatch");
  for (std::size_t k = 0; k < d; ++k) {
    if (!(correlation_lengths[k] > 0.0)) throw ConfigError("correlation length must be positive");
    if (!(upper[k] > lower[k])) throw ConfigError("covariance box must have positive extent");
  }
  if (!(std_dev >= 0.0)) throw ConfigError("standard deviation must be non-negative");
}

double EigenPair1D::operator()(double x) const {
  const double s = frequency * (x - center);
  return (even ? std::cos(s) : std::sin(s)) / norm;
}

namespace {

template <class F>
double bisect(F f, double a, double b, const char* family, int index) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    std::ostringstream msg;
    msg << "eigenvalue root bracket failure: " << family << " root " << index << " not bracketed by ["
        << a << ", " << b << "]";
    throw NumericalError(msg.str());
  }
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<EigenPair1D> solve_1d_eigenpairs(double ell, double lower, double upper, int count) {
  if (!(ell > 0.0)) throw ConfigError("correlation length must be positive");
  if (!(upper > lower)) throw ConfigError("interval must have positive length");
  if (count < 0) throw ConfigError("eigenpair count must be non-negative");
  constexpr double pi = std::numbers::pi;
  const double c = 1.0 / ell;
  const double half = 0.5 * (upper - lower);
  const double ca = c * half;
  std::vector<EigenPair1D> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  // In t = omega*A the roots interlace: even_i in (i pi, i pi + pi/2),
  // odd_i in (i pi + pi/2, (i+1) pi); the eigenvalue 2c/(omega^2+c^2) is
  // decreasing in omega, so alternating the families sorts the pairs.
  for (int j = 0; j < count; ++j) {
    const int i = j / 2;
    EigenPair1D p;
    p.center = 0.5 * (lower + upper);
    double t = 0.0;
    if (j % 2 == 0) {
      p.even = true;
      t = bisect([ca](double s) { return s * std::sin(s) - ca * std::cos(s); }, i * pi,
                 i * pi + 0.5 * pi, "even", i);
    } else {
      p.even = false;
      t = bisect([ca](double s) { return s * std::cos(s) + ca * std::sin(s); }, i * pi + 0.5 * pi,
                 (i + 1) * pi, "odd", i);
    }
    const double omega = t / half;
    p.frequency = omega;
    p.lambda = 2.0 * c / (omega * omega + c * c);
    const double tail = std::sin(2.0 * omega * half) / (2.0 * omega);
    p.norm = std::sqrt(p.even ? half + tail : half - tail);
    pairs.push_back(p);
  }
  return pairs;
}

double EigenPair::operator()(const Point& x) const {
  double v = 1.0;
  for (std::size_t k = 0; k < factors.size(); ++k) v *= factors[k](x[k]);
  return v;
}

int candidates_per_axis(int count) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(std::max(count, 0))))) + 4;
}

std::vector<EigenPair> tensorize_2d(const std::vector<EigenPair1D>& pairs_x,
                                    const std::vector<EigenPair1D>& pairs_y, int count) {
  if (count < 0) throw ConfigError("eigenpair count must be non-negative");
  const int mx = static_cast<int>(pairs_x.size());
  const int my = static_cast<int>(pairs_y.size());
  if (static_cast<long>(mx) * my < count)
    throw Error("insufficient 1D eigenpairs: need at least " + std::to_string(count) + " products");
  std::vector<EigenPair> all;
  all.reserve(static_cast<std::size_t>(mx * my));
  for (int i = 0; i < mx; ++i)
    for (int j = 0; j < my; ++j) {
      EigenPair p;
      p.lambda = pairs_x[static_cast<std::size_t>(i)].lambda * pairs_y[static_cast<std::size_t>(j)].lambda;
      p.factors = {pairs_x[static_cast<std::size_t>(i)], pairs_y[static_cast<std::size_t>(j)]};
      p.factor_index = {i, j};
      all.push_back(std::move(p));
    }
  std::stable_sort(all.begin(), all.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.lambda > b.lambda; });
  all.resize(static_cast<std::size_t>(count));
  // Any product using an index beyond the lists is bounded by a product with
  // the last listed index; if none of those made the cut, the selection is exact.
  for (const auto& p : all)
    if (p.factor_index[0] == mx - 1 || p.factor_index[1] == my - 1)
      throw Error("insufficient 1D eigenpairs: selection reaches the last candidate (" +
                  std::to_string(mx) + "x" + std::to_string(my) + "); request more");
  return all;
}

std::vector<EigenPair> exponential_eigenpairs(const ExponentialCovariance& cov, int count) {
  cov.validate();
  const double variance = cov.std_dev * cov.std_dev;
  std::vector<EigenPair> out;
  if (cov.dimension() == 1) {
    for (const auto& p : solve_1d_eigenpairs(cov.correlation_lengths[0], cov.lower[0], cov.upper[0], count))
      out.push_back(EigenPair{p.lambda, {p}, {static_cast<int>(out.size())}});
  } else {
    const int m = candidates_per_axis(count);
    const auto px = solve_1d_eigenpairs(cov.correlation_lengths[0], cov.lower[0], cov.upper[0], m);
    const auto py = solve_1d_eigenpairs(cov.correlation_lengths[1], cov.lower[1], cov.upper[1], m);
    out = tensorize_2d(px, py, count);
  }
  for (auto& p : out) p.lambda *= variance;
  return out;
}

KlField::KlField(ScalarField mean, double std_dev, std::vector<EigenPair> pairs)
    : mean_(std::move(mean)), std_dev_(std_dev), pairs_(std::move(pairs)) {
  if (!(std_dev_ >= 0.0)) throw ConfigError("standard deviation must be non-negative");
}

KlField KlField::constant(ScalarField mean) { return KlField(std::move(mean), 0.0, {}); }

double KlField::mode(int k, const Point& x) const {
  const EigenPair& p = pairs_.at(static_cast<std::size_t>(k));
  return std_dev_ * std::sqrt(p.lambda) * p(x);
}

ScalarField KlField::mode_function(int k) const {
  const EigenPair p = pairs_.at(static_cast<std::size_t>(k));
  const double scale = std_dev_ * std::sqrt(p.lambda);
  return [p, scale](const Point& x) { return scale * p(x); };
}

ScalarField KlField::mean_function() const {
  if (mean_) return mean_;
  return [](const Point&) { return 0.0; };
}

double KlField::evaluate(std::span<const double> xi, const Point& x) const {
  if (static_cast<int>(xi.size()) < modes())
    throw DimensionError("random vector shorter than the number of field modes");
  double v = mean(x);
  for (int k = 0; k < modes(); ++k) v += mode(k, x) * xi[static_cast<std::size_t>(k)];
  return v;
}

double KlField::variance(const Point& x) const {
  double v = 0.0;
  for (int k = 0; k < modes(); ++k) {
    const double a = mode(k, x);
    v += a * a;
  }
  return v;
}

PositivityBounds field_bounds(const KlField& field, std::span<const double> lower,
                              std::span<const double> upper, int resolution) {
  if (resolution < 1) throw ConfigError("grid resolution must be positive");
  if (lower.size() != upper.size() || lower.empty() || lower.size() > 2)
    throw DimensionError("positivity grid must be 1D or 2D");
  const double r3 = std::sqrt(3.0);
  const int n = resolution;
  const int ny = lower.size() == 2 ? n : 0;
  std::vector<double> max_abs(static_cast<std::size_t>(field.modes()), 0.0);
  double mean_min = INFINITY, mean_max = -INFINITY;
  double sharp_min = INFINITY, sharp_max = -INFINITY;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= ny; ++j) {
      Point x{lower[0] + (upper[0] - lower[0]) * i / n, 0.0};
      if (ny > 0) x[1] = lower[1] + (upper[1] - lower[1]) * j / ny;
      const double m = field.mean(x);
      double spread = 0.0;
      for (int k = 0; k < field.modes(); ++k) {
        const double a = std::abs(field.mode(k, x));
        spread += a;
        max_abs[static_cast<std::size_t>(k)] = std::max(max_abs[static_cast<std::size_t>(k)], a);
      }
      mean_min = std::min(mean_min, m);
      mean_max = std::max(mean_max, m);
      sharp_min = std::min(sharp_min, m - r3 * spread);
      sharp_max = std::max(sharp_max, m + r3 * spread);
    }
  double total = 0.0;
  for (double a : max_abs) total += a;
  PositivityBounds b;
  b.conservative_min = mean_min - r3 * total;
  b.conservative_max = mean_max + r3 * total;
  b.sharp_min = sharp_min;
  b.sharp_max = sharp_max;
  b.positive = sharp_min > 0.0;
  return b;
}

PositivityBounds check_positivity(const KlField& field, std::span<const double> lower,
                                  std::span<const double> upper, int resolution) {
  PositivityBounds b = field_bounds(field, lower, upper, resolution);
  if (!b.positive) {
    std::ostringstream msg;
    msg << "random field is not uniformly positive: min over Gamma x D is " << b.sharp_min;
    throw NumericalError(msg.str());
  }
  return b;
}

BoundaryNoise::BoundaryNoise(std::vector<std::function<double(double)>> modes)
    : modes_(std::move(modes)) {}

BoundaryNoise brownian_bridge_modes(int count) {
  if (count < 1) throw ConfigError("Brownian bridge needs at least one mode");
  std::vector<std::function<double(double)>> modes;
  for (int k = 1; k <= count; ++k) {
    const double kp = k * std::numbers::pi;
    const double scale = std::sqrt(2.0) / kp;
    modes.emplace_back([kp, scale](double s) { return scale * std::sin(kp * s); });
  }
  return BoundaryNoise(std::move(modes));
}

}  // namespace sgbc
