#include "sgbc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sgbc/expression.hpp"
#include "sgbc/parallel.hpp"
#include "sgbc/simd.hpp"

namespace sgbc {

const MeshPtr& MeshFamily::at(int level) const {
  if (level < 0 || level >= static_cast<int>(levels.size()))
    throw ConfigError("mesh level " + std::to_string(level) + " is not in the family");
  return levels[static_cast<std::size_t>(level)];
}

double level_h(int level) { return std::ldexp(1.0, -level); }

MeshFamily build_mesh_family(const std::string& domain, int finest) {
  MeshFamily family;
  MeshPtr m = domain == "interval" ? build_interval_mesh(level_h(finest)) : build_square_mesh(finest);
  family.levels.resize(static_cast<std::size_t>(finest) + 1);
  for (int l = finest; l >= 0; --l) {
    if (!m) throw Error("mesh family is missing level " + std::to_string(l));
    family.levels[static_cast<std::size_t>(l)] = m;
    m = m->parent;
  }
  return family;
}

GalerkinBounds galerkin_coefficient_bounds(const KlField& field, const GpcBasis& basis, int dim, int resolution) {
  const StochasticMoments moments = assemble_moments(basis);
  const Index nm = basis.size();
  const int nmodes = std::min(field.modes(), basis.dimension());
  GalerkinBounds out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::vector<DenseMatrix> pk;
  for (int k = 0; k < nmodes; ++k) pk.emplace_back(DenseMatrix(moments.P[static_cast<std::size_t>(k)]));
  const int ny = dim == 1 ? 0 : resolution;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j <= ny; ++j) {
      const Point x{static_cast<double>(i) / resolution, dim == 1 ? 0.0 : static_cast<double>(j) / resolution};
      DenseMatrix a = field.mean(x) * DenseMatrix::Identity(nm, nm);
      for (int k = 0; k < nmodes; ++k) a += field.mode(k, x) * pk[static_cast<std::size_t>(k)];
      const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(a, Eigen::EigenvaluesOnly);
      out.min_eigenvalue = std::min(out.min_eigenvalue, eig.eigenvalues().minCoeff());
      out.max_eigenvalue = std::max(out.max_eigenvalue, eig.eigenvalues().maxCoeff());
    }
  }
  return out;
}

namespace {

KlField make_field(const ExperimentConfig& c, const FieldSpec& spec) {
  const ScalarField mean = Expression(spec.mean).function();
  if (!spec.random) return KlField::constant(mean);
  const int d = c.spatial_dimension();
  ExponentialCovariance cov;
  cov.correlation_lengths.assign(static_cast<std::size_t>(d), spec.correlation_length);
  cov.std_dev = spec.std_dev;
  cov.lower.assign(static_cast<std::size_t>(d), 0.0);
  cov.upper.assign(static_cast<std::size_t>(d), 1.0);
  std::vector<EigenPair> pairs = exponential_eigenpairs(cov, c.noise_dimension);
  if (c.eigenvalue_scaling == "unit" && spec.std_dev > 0.0)
    for (auto& p : pairs) p.lambda /= spec.std_dev * spec.std_dev;
  return KlField(mean, spec.std_dev, std::move(pairs));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

}  // namespace

ProblemFields build_fields(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  ProblemFields f;
  f.diffusion = make_field(config, config.diffusion);
  f.source = make_field(config, config.source);
  f.desired_state = Expression(config.desired_state).function();
  if (config.boundary_noise == "brownian_bridge") f.noise = brownian_bridge_modes(config.noise_dimension);

  const std::size_t d = static_cast<std::size_t>(config.spatial_dimension());
  const std::vector<double> lo(d, 0.0), hi(d, 1.0);
  f.positivity = field_bounds(f.diffusion, lo, hi, config.positivity_resolution);
  if (!f.positivity.positive) {
    std::ostringstream msg;
    msg << "diffusion field is not pointwise positive on Gamma x D: sharp minimum " << f.positivity.sharp_min;
    if (config.positivity == "enforce") throw NumericalError(msg.str());
    if (log) *log << "warning: " << msg.str() << '\n';
  }
  return f;
}

Discretization::Discretization(const ExperimentConfig& config, const ProblemFields& fields, MeshPtr mesh,
                               int degree)
    : mesh_(std::move(mesh)), basis_(MultiIndexSet(config.noise_dimension, degree)) {
  const FemMatrices fem = assemble_fem(*mesh_, fields.diffusion);
  const LoadVectors loads = assemble_loads(*mesh_, fields.source, fields.desired_state);
  mass_ = fem.M;
  SgInputs in;
  in.mesh = mesh_.get();
  in.basis = &basis_;
  in.fem = &fem;
  in.loads = &loads;
  if (fields.noise.modes() > 0) in.noise = project_boundary_noise(*mesh_, fields.noise);
  in.alpha = config.alpha;
  sg_ = assemble_sg_system(in);
}

SolveOutcome solve_cell(const ExperimentConfig& config, const Discretization& disc,
                        std::optional<PreconditionerVariant> variant) {
  const auto start = std::chrono::steady_clock::now();
  const SgSystem& sg = disc.system();
  const PreconditionerVariant v = variant ? *variant : parse_variant(config.solver.preconditioner, disc.degree());
  SolveOutcome out;
  CellResult& r = out.result;
  r.level = disc.mesh().level;
  r.h = disc.mesh().h;
  r.degree = disc.degree();
  r.n_modes = sg.n_modes;
  r.unknowns = sg.saddle_size();
  r.variant = variant_name(v);
  r.constrained = config.bounds.has_value();

  const BlockPreconditioner prec(sg, v);
  const KrylovSettings minres_settings{config.solver.tol, config.solver.maxit};
  if (!r.constrained) {
    const SaddleOperator op(sg);
    Vector x;
    const KrylovReport rep = minres(op, saddle_rhs(sg), prec, x, minres_settings);
    r.iterations = rep.iterations;
    r.relative_residual = rep.relative_residual;
    r.converged = rep.converged();
    r.status = status_name(rep.status);
    r.history = rep.history;
    SaddleParts parts = unpack(sg, x);
    out.solution.y0 = std::move(parts.y0);
    out.solution.u = std::move(parts.u);
    out.solution.p = std::move(parts.p);
  } else {
    PdasSettings ps;
    ps.sigma = config.solver.sigma;
    ps.max_outer = config.solver.max_outer;
    ps.inner = {config.solver.bicgstab_tol, config.solver.bicgstab_maxit};
    ps.initial = minres_settings;
    PdasResult res = pdas_solve(sg, prec, *config.bounds, ps);
    r.iterations = res.initial_iterations;
    r.converged = res.converged;
    r.status = res.converged ? "converged" : res.message;
    r.pdas_outer = res.outer_iterations;
    for (const auto& e : res.log) r.pdas_inner_total += e.inner_iterations;
    r.relative_residual = res.log.empty() ? 0.0 : res.log.back().inner_residual;
    r.complementarity = res.complementarity;
    r.pdas_log = res.log;
    out.solution.y0 = std::move(res.y0);
    out.solution.u = std::move(res.u);
    out.solution.p = std::move(res.p);
    out.solution.lambda = std::move(res.lambda);
  }
  r.objective = evaluate_objective(sg, out.solution.y0, out.solution.u);
  r.max_control = out.solution.u.size() > 0 ? out.solution.u.maxCoeff() : 0.0;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RowMatrix full_state(const SgSystem& sg, const RowMatrix& y0, const Vector& u) {
  const Index ni = sg.n_interior;
  const Index nb = sg.n_boundary;
  RowMatrix y = RowMatrix::Zero(ni + nb, sg.n_modes);
  y.topRows(ni) = y0;
  y.block(ni, 0, nb, 1) = u;
  const Index nl = std::min<Index>(sg.b.cols(), sg.n_modes - 1);
  if (nl > 0) y.block(ni, 1, nb, nl) = sg.b.leftCols(nl);
  return y;
}

double state_error(const Discretization& run, const CellSolution& sol, const Discretization& ref,
                   const CellSolution& ref_sol) {
  if (run.system().n_modes > ref.system().n_modes)
    throw DimensionError("state_error: reference basis is smaller than the run basis");
  const RowMatrix y = full_state(run.system(), sol.y0, sol.u);
  const RowMatrix yf = prolong_nodal(run.mesh(), ref.mesh(), y);
  RowMatrix d = full_state(ref.system(), ref_sol.y0, ref_sol.u);
  d.leftCols(yf.cols()) -= yf;
  const RowMatrix md = ref.mass() * d;
  return std::sqrt(std::max(0.0, md.cwiseProduct(d).sum()));
}

double control_error(const Mesh& run_mesh, const Vector& u, const Mesh& ref_mesh, const Vector& u_ref,
                     const SparseMatrix& ref_boundary_mass) {
  const Vector d = u_ref - prolong_boundary(run_mesh, ref_mesh, u);
  return std::sqrt(std::max(0.0, d.dot(ref_boundary_mass * d)));
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size()) throw DimensionError("fit_slope: h and errors differ in length");
  if (h.size() < 3) throw Error("fit_slope needs at least 3 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(errors[i] > 0.0)) throw Error("fit_slope needs positive h and errors");
    const double x = std::log(h[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error("fit_slope needs distinct mesh sizes");
  return (n * sxy - sx * sy) / den;
}

SlopeFit fit_finest_slope(const std::vector<double>& h, const std::vector<double>& errors, double h_ref) {
  SlopeFit fit;
  std::vector<std::size_t> order(h.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] < h[b]; });
  std::vector<double> hp, ep;
  for (std::size_t i : order) {
    if (errors[i] > 0.0) {
      hp.push_back(h[i]);
      ep.push_back(errors[i]);
    }
  }
  if (hp.size() < 3) {
    fit.note = "fewer than 3 positive errors";
    return fit;
  }
  const double pilot = fit_slope(hp, ep);
  fit.contamination = ep.front() * std::pow(h_ref / hp.front(), std::max(pilot, 0.0));
  std::vector<double> hs, es;
  for (std::size_t i = 0; i < hp.size() && hs.size() < 3; ++i) {
    if (ep[i] > 10.0 * fit.contamination) {
      hs.push_back(hp[i]);
      es.push_back(ep[i]);
    }
  }
  if (hs.size() < 3) {
    fit.note = "fewer than 3 levels above 10x the reference contamination";
    return fit;
  }
  fit.slope = fit_slope(hs, es);
  fit.h_used = hs;
  fit.valid = true;
  return fit;
}

ConvergenceReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  ConvergenceReport report;
  report.config = config;
  std::ostream* log = options.log;
  const ProblemFields fields = build_fields(config, log);
  report.positivity = fields.positivity;
  const MeshFamily family = build_mesh_family(config.domain, config.reference.level);

  // Galerkin coercivity on the largest basis in use.
  const GpcBasis ref_basis(MultiIndexSet(config.noise_dimension, config.reference.degree));
  report.galerkin = galerkin_coefficient_bounds(fields.diffusion, ref_basis, config.spatial_dimension(),
                                                std::min(config.positivity_resolution, 32));
  if (!(report.galerkin.min_eigenvalue > 0.0))
    throw NumericalError("stochastic Galerkin diffusion is not coercive: smallest coefficient eigenvalue " +
                         std::to_string(report.galerkin.min_eigenvalue));

  const Discretization ref(config, fields, family.at(config.reference.level), config.reference.degree);
  if (log) *log << "reference: level " << config.reference.level << ", Q=" << config.reference.degree << ", "
                << ref.system().saddle_size() << " unknowns" << std::endl;
  SolveOutcome ref_out = solve_cell(config, ref, options.variant);
  report.reference = ref_out.result;
  if (!ref_out.result.converged) report.all_converged = false;
  if (log) *log << "  " << ref_out.result.status << " after " << ref_out.result.iterations << " iterations, "
                << ref_out.result.seconds << " s" << std::endl;

  for (int q : config.degrees) {
    for (int l : config.levels) {
      const Discretization disc(config, fields, family.at(l), q);
      SolveOutcome out = solve_cell(config, disc, options.variant);
      CellResult& r = out.result;
      r.state_error = state_error(disc, out.solution, ref, ref_out.solution);
      r.control_error =
          control_error(disc.mesh(), out.solution.u, ref.mesh(), ref_out.solution.u, ref.system().Mboundary);
      if (!r.converged) report.all_converged = false;
      if (log)
        *log << "level " << l << " Q=" << q << ": " << r.status << ", " << r.iterations << " it"
             << (r.constrained ? ", PDAS " + std::to_string(r.pdas_outer) + " outer" : std::string()) << ", state "
             << r.state_error << ", control " << r.control_error << ", " << r.seconds << " s" << std::endl;
      report.cells.push_back(std::move(r));
    }
  }

  const double h_ref = family.at(config.reference.level)->h;
  for (int q : config.degrees) {
    std::vector<double> h, es, ec;
    for (const auto& c : report.cells) {
      if (c.degree != q) continue;
      h.push_back(c.h);
      es.push_back(c.state_error);
      ec.push_back(c.control_error);
    }
    report.state_slopes.emplace_back(q, fit_finest_slope(h, es, h_ref));
    report.control_slopes.emplace_back(q, fit_finest_slope(h, ec, h_ref));
  }
  return report;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  return os;
}

std::string h_label(double h) {
  const int e = static_cast<int>(std::lround(-std::log2(h)));
  return "2^-" + std::to_string(e);
}

}  // namespace

void emit_reports(const ConvergenceReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root / "residuals");

  {
    auto os = open_out(root / "errors_vs_h.csv");
    os << "h,level,Q,state_error,control_error\n";
    for (const auto& c : report.cells)
      os << format_double(c.h) << ',' << c.level << ',' << c.degree << ',' << format_double(c.state_error) << ','
         << format_double(c.control_error) << '\n';
  }
  {
    // Table layout: one row per Q, one column per mesh size.
    std::vector<int> levels, degrees;
    for (const auto& c : report.cells) {
      if (std::find(levels.begin(), levels.end(), c.level) == levels.end()) levels.push_back(c.level);
      if (std::find(degrees.begin(), degrees.end(), c.degree) == degrees.end()) degrees.push_back(c.degree);
    }
    std::sort(levels.begin(), levels.end());
    auto os = open_out(root / "iterations.csv");
    os << "Q";
    for (int l : levels) os << ',' << h_label(level_h(l));
    os << '\n';
    for (int q : degrees) {
      os << q;
      for (int l : levels) {
        os << ',';
        for (const auto& c : report.cells)
          if (c.degree == q && c.level == l) os << (c.constrained ? c.pdas_inner_total : c.iterations);
      }
      os << '\n';
    }
  }
  {
    auto os = open_out(root / "pdas_log.csv");
    os << "level,Q,iteration,lower_active,upper_active,inner_iterations,inner_residual,objective,set_changes\n";
    for (const auto& c : report.cells)
      for (const auto& e : c.pdas_log)
        os << c.level << ',' << c.degree << ',' << e.iteration << ',' << e.lower_active << ',' << e.upper_active
           << ',' << e.inner_iterations << ',' << format_double(e.inner_residual) << ','
           << format_double(e.objective) << ',' << e.set_changes << '\n';
  }
  {
    auto os = open_out(root / "slopes.csv");
    os << "quantity,Q,slope,valid,points,contamination\n";
    auto write = [&](const char* what, const std::vector<std::pair<int, SlopeFit>>& fits) {
      for (const auto& [q, f] : fits)
        os << what << ',' << q << ',' << format_double(f.slope) << ',' << (f.valid ? 1 : 0) << ','
           << f.h_used.size() << ',' << format_double(f.contamination) << '\n';
    };
    write("state", report.state_slopes);
    write("control", report.control_slopes);
  }
  {
    auto os = open_out(root / "cells.csv");
    os << "level,Q,n_modes,unknowns,variant,status,iterations,relative_residual,pdas_outer,pdas_inner_total,"
          "complementarity,objective,max_control\n";
    for (const auto& c : report.cells)
      os << c.level << ',' << c.degree << ',' << c.n_modes << ',' << c.unknowns << ',' << c.variant << ','
         << c.status << ',' << c.iterations << ',' << format_double(c.relative_residual) << ',' << c.pdas_outer
         << ',' << c.pdas_inner_total << ',' << format_double(c.complementarity) << ','
         << format_double(c.objective) << ',' << format_double(c.max_control) << '\n';
  }
  for (const auto& c : report.cells) {
    auto os = open_out(root / "residuals" /
                       ("residual_L" + std::to_string(c.level) + "_Q" + std::to_string(c.degree) + ".csv"));
    os << "iteration,relative_residual\n";
    for (std::size_t i = 0; i < c.history.size(); ++i) os << i << ',' << format_double(c.history[i]) << '\n';
  }
  {
    nlohmann::json m;
    m["config"] = config_to_json(report.config);
    m["versions"] = {{"sgbc", "1.0.0"},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                     {"compiler", __VERSION__}};
    m["simd"] = std::string(simd::name(simd::kernels().isa));
    m["all_converged"] = report.all_converged;
    m["reference"] = {{"level", report.reference.level},
                      {"degree", report.reference.degree},
                      {"unknowns", report.reference.unknowns},
                      {"iterations", report.reference.iterations},
                      {"status", report.reference.status}};
    m["positivity"] = {{"sharp_min", report.positivity.sharp_min},
                       {"conservative_min", report.positivity.conservative_min},
                       {"galerkin_min_eigenvalue", report.galerkin.min_eigenvalue}};
    m["outputs"] = {"errors_vs_h.csv", "iterations.csv", "pdas_log.csv", "slopes.csv", "cells.csv", "residuals/"};
    auto os = open_out(root / "manifest.json");
    os << m.dump(2) << '\n';
  }
}

}  // namespace sgbc
