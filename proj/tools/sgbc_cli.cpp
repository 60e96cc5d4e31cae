// Command line driver: run a convergence study, check invariants on a
// configured problem, or export its matrices in Matrix Market format.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "sgbc/config.hpp"
#include "sgbc/experiment.hpp"
#include "sgbc/matrix_market.hpp"
#include "sgbc/parallel.hpp"
#include "sgbc/simd.hpp"

namespace {

using namespace sgbc;

struct CommonOptions {
  std::string config;
  std::string out = "out";
  int threads = 1;
  std::string solver;
  double tol = 0.0;
};

ExperimentConfig load_with_overrides(const CommonOptions& o) {
  ExperimentConfig c = load_config(o.config);
  if (!o.solver.empty()) c.solver.preconditioner = o.solver;
  if (o.tol > 0.0) c.solver.tol = o.tol;
  c.validate();
  return c;
}

int command_run(const CommonOptions& o) {
  const ExperimentConfig c = load_with_overrides(o);
  RunOptions ro;
  ro.log = &std::cerr;
  const ConvergenceReport report = run_experiment(c, ro);
  emit_reports(report, o.out);
  for (const auto& [q, f] : report.state_slopes)
    std::cout << "state slope Q=" << q << ": " << (f.valid ? std::to_string(f.slope) : f.note) << '\n';
  for (const auto& [q, f] : report.control_slopes)
    std::cout << "control slope Q=" << q << ": " << (f.valid ? std::to_string(f.slope) : f.note) << '\n';
  std::cout << "reports written to " << o.out << '\n';
  return report.all_converged ? 0 : 1;
}

struct CheckLine {
  bool pass;
  std::string name;
  double value;
};

// Invariants of the assembled system on the coarsest configured cell.
int command_check(const CommonOptions& o) {
  const ExperimentConfig c = load_with_overrides(o);
  const ProblemFields fields = build_fields(c, &std::cerr);
  const int level = *std::min_element(c.levels.begin(), c.levels.end());
  const int degree = *std::max_element(c.degrees.begin(), c.degrees.end());
  const MeshFamily family = build_mesh_family(c.domain, level);
  const Discretization disc(c, fields, family.at(level), degree);
  const SgSystem& sg = disc.system();
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto random_vector = [&](Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = unif(rng);
    return v;
  };
  std::vector<CheckLine> lines;

  validate_mesh(disc.mesh());
  lines.push_back({true, "mesh invariants", 0.0});

  const SaddleOperator op(sg);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Vector v = random_vector(op.size()), w = random_vector(op.size());
    Vector av, aw;
    op.apply(v, av);
    op.apply(w, aw);
    worst = std::max(worst, std::abs(av.dot(w) - v.dot(aw)) / (v.norm() * w.norm()));
  }
  lines.push_back({worst < 1e-12, "saddle operator symmetry", worst});

  double min_energy = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 20; ++t) {
    const Vector v = random_vector(sg.block_size());
    RowMatrix x = ConstBlockMap(v.data(), sg.n_interior, sg.n_modes), y;
    sg.K_II.apply(x, y);
    min_energy = std::min(min_energy, x.cwiseProduct(y).sum() / v.squaredNorm());
  }
  lines.push_back({min_energy > 0.0, "K_II positive on random vectors", min_energy});

  const BlockPreconditioner prec(sg, parse_variant(c.solver.preconditioner, degree));
  double min_prec = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 20; ++t) {
    const Vector v = random_vector(prec.size());
    Vector pv;
    prec.apply(v, pv);
    min_prec = std::min(min_prec, v.dot(pv) / v.squaredNorm());
  }
  lines.push_back({min_prec > 0.0, "preconditioner positive definite", min_prec});

  const GalerkinBounds g = galerkin_coefficient_bounds(fields.diffusion, disc.basis(), c.spatial_dimension(), 16);
  lines.push_back({g.min_eigenvalue > 0.0, "Galerkin diffusion coercive", g.min_eigenvalue});

  bool all = true;
  for (const auto& l : lines) {
    std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << " (" << l.value << ")\n";
    all = all && l.pass;
  }
  return all ? 0 : 1;
}

int command_export(const CommonOptions& o, int level, int degree) {
  const ExperimentConfig c = load_with_overrides(o);
  const ProblemFields fields = build_fields(c, &std::cerr);
  const MeshFamily family = build_mesh_family(c.domain, level);
  const Discretization disc(c, fields, family.at(level), degree);
  const SgSystem& sg = disc.system();
  namespace fs = std::filesystem;
  fs::create_directories(o.out);
  const fs::path root(o.out);
  const StochasticMoments moments = assemble_moments(disc.basis());
  write_matrix_market((root / "Pbar.mtx").string(), moments.Pbar, true);
  for (std::size_t k = 0; k < moments.P.size(); ++k)
    write_matrix_market((root / ("P_" + std::to_string(k + 1) + ".mtx")).string(), moments.P[k], true);
  write_matrix_market((root / "Kbar_II.mtx").string(), sg.Kbar_II, true);
  for (std::size_t k = 0; k < sg.K_k_II.size(); ++k)
    write_matrix_market((root / ("K_" + std::to_string(k + 1) + "_II.mtx")).string(), sg.K_k_II[k], true);
  write_matrix_market((root / "M_II.mtx").string(), sg.Mspatial_II, true);
  write_matrix_market((root / "M_IB.mtx").string(), sg.M_IB);
  write_matrix_market((root / "M_BB.mtx").string(), sg.M_BB, true);
  write_matrix_market((root / "Mboundary.mtx").string(), sg.Mboundary, true);
  write_matrix_market((root / "rhs.mtx").string(), saddle_rhs(sg));
  if (sg.saddle_size() <= c.export_cap) {
    write_matrix_market((root / "saddle.mtx").string(), materialize(SaddleOperator(sg)));
    std::cout << "saddle system (" << sg.saddle_size() << " unknowns, node-major blocks) written\n";
  } else {
    std::cout << "saddle system has " << sg.saddle_size() << " unknowns, above export_cap " << c.export_cap
              << "; only the factors were written\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Galerkin solver for Dirichlet boundary control with random data"};
  app.require_subcommand(1);
  CommonOptions opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--solver", opts.solver, "preconditioner: mean, ullmann or auto")
        ->check(CLI::IsMember({"mean", "ullmann", "auto"}));
    sub->add_option("--tol", opts.tol, "MINRES relative tolerance")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "run the convergence study and write reports");
  add_common(run);
  auto* check = app.add_subcommand("check", "check invariants of the assembled system");
  add_common(check);
  auto* exp = app.add_subcommand("export-system", "write matrices in Matrix Market format");
  add_common(exp);
  int level = 2, degree = 1;
  exp->add_option("--level", level, "mesh level");
  exp->add_option("--degree", degree, "chaos degree Q");

  CLI11_PARSE(app, argc, argv);
  try {
    parallel::set_threads(opts.threads);
    std::cerr << "kernels: " << simd::name(simd::kernels().isa) << ", threads: " << parallel::threads() << '\n';
    if (*run) return command_run(opts);
    if (*check) return command_check(opts);
    return command_export(opts, level, degree);
  } catch (const sgbc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
