#include "sgbc/pdas.hpp"

#include <algorithm>
#include <cmath>

namespace sgbc {

void BoxBounds::validate() const {
  if (std::isnan(lower) || std::isnan(upper)) throw ConfigError("control bounds must not be NaN");
  if (!(lower <= upper)) throw ConfigError("control bounds need u_a <= u_b");
}

ActiveSets compute_active_sets(const Vector& u, const Vector& lambda, const BoxBounds& bounds, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (u.size() != lambda.size()) throw DimensionError("active sets: u and lambda differ in length");
  ActiveSets sets;
  for (Index j = 0; j < u.size(); ++j) {
    const int id = static_cast<int>(j);
    if (lambda[j] + sigma * (u[j] - bounds.upper) > 0.0)
      sets.upper.push_back(id);
    else if (lambda[j] - sigma * (bounds.lower - u[j]) < 0.0)
      sets.lower.push_back(id);
    else
      sets.inactive.push_back(id);
  }
  return sets;
}

Vector complementarity_residual(const Vector& u, const Vector& lambda, const BoxBounds& bounds, double sigma) {
  Vector r(u.size());
  for (Index j = 0; j < u.size(); ++j)
    r[j] = lambda[j] - std::max(0.0, lambda[j] + sigma * (u[j] - bounds.upper)) -
           std::min(0.0, lambda[j] - sigma * (bounds.lower - u[j]));
  return r;
}

namespace {

std::vector<int> active_list(const ActiveSets& sets) {
  std::vector<int> a = sets.lower;
  a.insert(a.end(), sets.upper.begin(), sets.upper.end());
  return a;
}

}  // namespace

PdasOperator::PdasOperator(const SgSystem& sg, const ActiveSets& sets)
    : sg_(sg), saddle_(sg), active_(active_list(sets)) {}

void PdasOperator::apply(const Vector& x, Vector& y) const {
  const Index ns = saddle_.size();
  if (x.size() != size()) throw DimensionError("PDAS operator: input has the wrong length");
  Vector ys;
  saddle_.apply(x.head(ns), ys);
  y.resize(size());
  y.head(ns) = ys;
  const Index uoff = sg_.block_size();
  for (std::size_t a = 0; a < active_.size(); ++a) {
    const Index j = uoff + active_[a];
    y[j] += x[ns + static_cast<Index>(a)];
    y[ns + static_cast<Index>(a)] = x[j];
  }
}

Vector pdas_rhs(const SgSystem& sg, const ActiveSets& sets, const BoxBounds& bounds) {
  const Vector base = saddle_rhs(sg);
  Vector rhs(base.size() + static_cast<Index>(sets.active_count()));
  rhs.head(base.size()) = base;
  Index k = base.size();
  for (std::size_t i = 0; i < sets.lower.size(); ++i) rhs[k++] = bounds.lower;
  for (std::size_t i = 0; i < sets.upper.size(); ++i) rhs[k++] = bounds.upper;
  return rhs;
}

PdasFullOperator::PdasFullOperator(const SgSystem& sg, const ActiveSets& sets, double sigma)
    : sg_(sg), saddle_(sg), is_active_(static_cast<std::size_t>(sg.n_boundary), 0), sigma_(sigma) {
  for (int j : sets.lower) is_active_[static_cast<std::size_t>(j)] = 1;
  for (int j : sets.upper) is_active_[static_cast<std::size_t>(j)] = 1;
}

void PdasFullOperator::apply(const Vector& x, Vector& y) const {
  const Index ns = saddle_.size();
  const Index nb = sg_.n_boundary;
  const Index uoff = sg_.block_size();
  if (x.size() != size()) throw DimensionError("PDAS operator: input has the wrong length");
  Vector ys;
  saddle_.apply(x.head(ns), ys);
  y.resize(size());
  y.head(ns) = ys;
  y.segment(uoff, nb) += x.tail(nb);
  for (Index j = 0; j < nb; ++j)
    y[ns + j] = is_active_[static_cast<std::size_t>(j)] ? sigma_ * x[uoff + j] : x[ns + j];
}

Vector pdas_full_rhs(const SgSystem& sg, const ActiveSets& sets, const BoxBounds& bounds, double sigma) {
  const Vector base = saddle_rhs(sg);
  Vector rhs = Vector::Zero(base.size() + sg.n_boundary);
  rhs.head(base.size()) = base;
  for (int j : sets.lower) rhs[base.size() + j] = sigma * bounds.lower;
  for (int j : sets.upper) rhs[base.size() + j] = sigma * bounds.upper;
  return rhs;
}

PdasPreconditioner::PdasPreconditioner(const BlockPreconditioner& base, const ActiveSets& sets)
    : base_(base) {
  const SgSystem& sg = base.system();
  const auto active = active_list(sets);
  const Index nb = sg.n_boundary;
  const auto na = static_cast<Index>(active.size());
  size_ = sg.saddle_size() + na;
  DenseMatrix c = DenseMatrix::Zero(nb + na, nb + na);
  c.topLeftCorner(nb, nb) = sg.control_block();
  for (Index a = 0; a < na; ++a) {
    c(active[static_cast<std::size_t>(a)], nb + a) = 1.0;
    c(nb + a, active[static_cast<std::size_t>(a)]) = 1.0;
  }
  control_.compute(c);
}

void PdasPreconditioner::apply(const Vector& x, Vector& y) const {
  const SgSystem& sg = base_.system();
  const Index nb = sg.block_size();
  const Index nbd = sg.n_boundary;
  const Index na = size_ - sg.saddle_size();
  if (x.size() != size_) throw DimensionError("PDAS preconditioner: input has the wrong length");
  y.resize(size_);
  RowMatrix a = ConstBlockMap(x.data(), sg.n_interior, sg.n_modes);
  base_.apply_mass_inverse(a);
  Vector ul(nbd + na);
  ul.head(nbd) = x.segment(nb, nbd);
  ul.tail(na) = x.tail(na);
  ul = control_.solve(ul);
  RowMatrix c = ConstBlockMap(x.data() + nb + nbd, sg.n_interior, sg.n_modes);
  base_.apply_schur_hat_inverse(c);
  y.head(nb) = Eigen::Map<const Vector>(a.data(), nb);
  y.segment(nb, nbd) = ul.head(nbd);
  y.segment(nb + nbd, nb) = Eigen::Map<const Vector>(c.data(), nb);
  y.tail(na) = ul.tail(na);
}

namespace {

std::size_t set_difference_count(const ActiveSets& a, const ActiveSets& b) {
  auto diff = [](const std::vector<int>& x, const std::vector<int>& y) {
    std::vector<int> out;
    std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return out.size();
  };
  return diff(a.lower, b.lower) + diff(a.upper, b.upper);
}

}  // namespace

PdasResult pdas_solve(const SgSystem& sg, const BlockPreconditioner& preconditioner, const BoxBounds& bounds,
                      const PdasSettings& settings) {
  bounds.validate();
  PdasResult res;
  res.sigma = settings.sigma > 0.0 ? settings.sigma : sg.alpha;
  const Index nb = sg.block_size();
  const Index nbd = sg.n_boundary;
  const Index ns = sg.saddle_size();

  // Unconstrained start, lambda = 0.
  const SaddleOperator saddle(sg);
  Vector x;
  const KrylovReport first = minres(saddle, saddle_rhs(sg), preconditioner, x, settings.initial);
  res.initial_iterations = first.iterations;
  if (!first.converged()) {
    res.message = "unconstrained start: MINRES " + status_name(first.status);
    return res;
  }
  Vector u = x.segment(nb, nbd);
  Vector lambda = Vector::Zero(nbd);
  ActiveSets sets = compute_active_sets(u, lambda, bounds, res.sigma);

  for (int k = 1; k <= settings.max_outer; ++k) {
    const PdasOperator op(sg, sets);
    const PdasPreconditioner prec(preconditioner, sets);
    const Vector rhs = pdas_rhs(sg, sets, bounds);
    // Warm start from the previous iterate.
    Vector z(op.size());
    z.head(ns) = x;
    const auto& active = op.active();
    for (std::size_t a = 0; a < active.size(); ++a) z[ns + static_cast<Index>(a)] = lambda[active[a]];
    const KrylovReport rep = bicgstab(op, rhs, prec, z, settings.inner);

    x = z.head(ns);
    u = x.segment(nb, nbd);
    lambda.setZero();
    for (std::size_t a = 0; a < active.size(); ++a) lambda[active[a]] = z[ns + static_cast<Index>(a)];

    const SaddleParts parts = unpack(sg, x);
    PdasLogEntry entry;
    entry.iteration = k;
    entry.lower_active = sets.lower.size();
    entry.upper_active = sets.upper.size();
    entry.inner_iterations = rep.iterations;
    entry.inner_residual = rep.relative_residual;
    entry.objective = evaluate_objective(sg, parts.y0, u);
    res.outer_iterations = k;
    if (!rep.converged()) {
      res.log.push_back(entry);
      res.message = "inner BiCGstab " + status_name(rep.status) + " at outer iteration " + std::to_string(k);
      res.sets = sets;
      break;
    }
    ActiveSets next = compute_active_sets(u, lambda, bounds, res.sigma);
    entry.set_changes = set_difference_count(sets, next);
    res.log.push_back(entry);
    if (next == sets) {
      res.converged = true;
      res.sets = sets;
      break;
    }
    sets = std::move(next);
    res.sets = sets;
  }
  if (!res.converged && res.message.empty())
    res.message = "active sets still changing after " + std::to_string(settings.max_outer) + " outer iterations";

  for (int j : res.sets.lower) u[j] = bounds.lower;
  for (int j : res.sets.upper) u[j] = bounds.upper;
  for (int j : res.sets.inactive) lambda[j] = 0.0;
  const SaddleParts parts = unpack(sg, x);
  res.y0 = parts.y0;
  res.p = parts.p;
  res.u = u;
  res.lambda = lambda;
  res.complementarity = complementarity_residual(u, lambda, bounds, res.sigma).lpNorm<Eigen::Infinity>();
  return res;
}

}  // namespace sgbc
