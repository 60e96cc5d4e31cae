// Acceptance run: one PASS/FAIL line per criterion, followed by the numbers
// behind it. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "../support/oracles.hpp"
#include "../support/problems.hpp"
#include "sgbc/config.hpp"
#include "sgbc/experiment.hpp"
#include "sgbc/simd.hpp"

namespace {

using namespace sgbc;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string summary;
  std::vector<std::string> info;
};

int failures = 0;

void print(int id, const std::string& title, const Verdict& v, double secs, double budget) {
  const bool in_time = secs < budget;
  const bool ok = v.pass && in_time;
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << ": " << v.summary << " ["
            << fmt("%.1f", secs) << " s, budget " << fmt("%.0f", budget) << " s" << (in_time ? "" : ", OVER BUDGET")
            << "]\n";
  for (const auto& line : v.info) std::cout << "        " << line << '\n';
  std::cout.flush();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

const SlopeFit* slope_for(const std::vector<std::pair<int, SlopeFit>>& fits, int q) {
  for (const auto& [d, f] : fits)
    if (d == q) return &f;
  return nullptr;
}

std::string row(const std::vector<double>& v, const char* f = "%.3e") {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt(f, x);
  return s;
}

// ---------------------------------------------------------------------------
// 1D study shared by criteria 1 and 2.

struct IntervalStudy {
  ExperimentConfig config;
  ConvergenceReport report;
  std::vector<double> h;
  std::vector<double> same_degree_errors;  // Q=3 runs against a Q=3 reference on the finest mesh
  double truncation = 0.0;                 // Q=3 vs Q=4 on the reference mesh
  double spatial_floor = 0.0;              // Q=4 run at h=2^-7 against the reference
};

IntervalStudy run_interval(const std::string& out) {
  IntervalStudy s;
  s.config = load_config(SGBC_CONFIG_DIR "/interval.json");
  s.report = run_experiment(s.config);
  emit_reports(s.report, out + "/interval");

  const ProblemFields fields = build_fields(s.config);
  const int lref = s.config.reference.level;
  const MeshFamily family = build_mesh_family(s.config.domain, lref);
  const Discretization ref4(s.config, fields, family.at(lref), s.config.reference.degree);
  const Discretization ref3(s.config, fields, family.at(lref), 3);
  const SolveOutcome r4 = solve_cell(s.config, ref4);
  const SolveOutcome r3 = solve_cell(s.config, ref3);
  s.truncation = state_error(ref3, r3.solution, ref4, r4.solution);
  for (int l : s.config.levels) {
    const Discretization d(s.config, fields, family.at(l), 3);
    const SolveOutcome o = solve_cell(s.config, d);
    s.h.push_back(level_h(l));
    s.same_degree_errors.push_back(state_error(d, o.solution, ref3, r3.solution));
  }
  const int lfix = 7;
  const Discretization d4(s.config, fields, family.at(lfix), 4);
  s.spatial_floor = state_error(d4, solve_cell(s.config, d4).solution, ref4, r4.solution);
  return s;
}

Verdict criterion_spatial_rate(const IntervalStudy& s) {
  Verdict v;
  const SlopeFit* f = slope_for(s.report.state_slopes, 3);
  std::vector<double> e;
  for (const auto& c : s.report.cells)
    if (c.degree == 3) e.push_back(c.state_error);
  if (f && f->valid) {
    v.pass = within(f->slope, 1.8, 2.2);
    v.summary = "state-error slope at Q=3 = " + fmt("%.3f", f->slope) + ", target [1.8, 2.2]";
  } else {
    v.pass = false;
    v.summary = "state-error slope at Q=3 not measurable against the Q=4 reference: " + (f ? f->note : "no fit");
  }
  v.info.push_back("Q=3 state errors, h=2^-2..2^-7: " + row(e));
  const double all = fit_slope(s.h, e);
  v.info.push_back("least-squares slope over all six levels: " + fmt("%.3f", all));
  v.info.push_back("stochastic truncation at the reference mesh, ||y(Q=3) - y(Q=4)||: " + fmt("%.3e", s.truncation));
  const std::vector<double> hs(s.h.end() - 3, s.h.end());
  const std::vector<double> es(s.same_degree_errors.end() - 3, s.same_degree_errors.end());
  v.info.push_back("diagnostic, Q=3 errors against a Q=3 reference at h=2^-8: " + row(s.same_degree_errors));
  v.info.push_back("diagnostic slope over the finest three of those: " + fmt("%.3f", fit_slope(hs, es)) +
                   " (spatial error only; not the criterion)");
  return v;
}

Verdict criterion_stochastic_rate(const IntervalStudy& s) {
  Verdict v;
  std::map<int, double> e;
  for (const auto& c : s.report.cells)
    if (c.level == 7) e[c.degree] = c.state_error;
  bool ok = e.size() == 3;
  std::string ratios;
  for (int q = 1; q < 3 && ok; ++q) {
    const double r = e[q + 1] / e[q];
    ratios += (ratios.empty() ? "" : ", ") + fmt("%.3f", r);
    if (e[q] <= 10.0 * s.spatial_floor) break;  // already near the spatial floor
    ok = ok && r <= 0.5;
  }
  v.pass = ok;
  v.summary = "error(Q+1)/error(Q) at h=2^-7 = " + ratios + ", target <= 0.5";
  v.info.push_back("errors Q=1,2,3: " + fmt("%.3e", e[1]) + " " + fmt("%.3e", e[2]) + " " + fmt("%.3e", e[3]));
  v.info.push_back("spatial floor estimate (Q=4 at h=2^-7 vs reference): " + fmt("%.3e", s.spatial_floor));
  return v;
}

// ---------------------------------------------------------------------------
// Criteria 4 and 5: MINRES counts on the 1D problem.

// Iteration table of the reference experiment, Q = 1..4 by h = 2^-2..2^-8.
const int kTable[4][7] = {{20, 29, 34, 38, 40, 44, 44},
                          {29, 35, 42, 44, 51, 54, 54},
                          {33, 41, 47, 49, 57, 56, 62},
                          {35, 44, 51, 56, 63, 63, 67}};

struct IterationStudy {
  int counts[4][7] = {};
  int mean_q4[7] = {};
  int ullmann_q4[7] = {};
  bool all_converged = true;
  double table_seconds = 0.0;
  double comparison_seconds = 0.0;  // the extra Q=4 solves with each variant
};

IterationStudy run_iterations() {
  IterationStudy s;
  ExperimentConfig c = load_config(SGBC_CONFIG_DIR "/interval.json");
  const ProblemFields fields = build_fields(c);
  const MeshFamily family = build_mesh_family(c.domain, 8);
  for (int l = 2; l <= 8; ++l)
    for (int q = 1; q <= 4; ++q) {
      const auto t0 = Clock::now();
      const Discretization d(c, fields, family.at(l), q);
      const SolveOutcome o = solve_cell(c, d);
      s.table_seconds += seconds_since(t0);
      s.all_converged = s.all_converged && o.result.converged;
      s.counts[q - 1][l - 2] = o.result.iterations;
      if (q == 4) {
        const auto t1 = Clock::now();
        const SolveOutcome m = solve_cell(c, d, PreconditionerVariant::mean_based);
        const SolveOutcome u = solve_cell(c, d, PreconditionerVariant::ullmann);
        s.all_converged = s.all_converged && m.result.converged && u.result.converged;
        s.mean_q4[l - 2] = m.result.iterations;
        s.ullmann_q4[l - 2] = u.result.iterations;
        s.comparison_seconds += seconds_since(t1);
      }
    }
  return s;
}

Verdict criterion_robustness(const IterationStudy& s) {
  Verdict v;
  int outside = 0, growth = 0;
  double worst_ratio = 1.0, worst_growth = 0.0;
  for (int q = 0; q < 4; ++q) {
    std::string line = "Q=" + std::to_string(q + 1) + ":";
    for (int l = 0; l < 7; ++l) {
      const double r = static_cast<double>(s.counts[q][l]) / kTable[q][l];
      if (!within(r, 0.5, 1.5)) ++outside;
      if (std::abs(std::log(r)) > std::abs(std::log(worst_ratio))) worst_ratio = r;
      if (l > 0) {
        const double g = static_cast<double>(s.counts[q][l]) / s.counts[q][l - 1];
        worst_growth = std::max(worst_growth, g);
        if (g > 1.6) ++growth;
      }
      line += " " + std::to_string(s.counts[q][l]) + "/" + std::to_string(kTable[q][l]);
    }
    v.info.push_back(line + "  (ours/table, h=2^-2..2^-8)");
  }
  v.pass = outside == 0 && growth == 0 && s.all_converged;
  v.summary = std::to_string(outside) + " of 28 counts outside [0.5x, 1.5x] (extreme ratio " +
              fmt("%.2f", worst_ratio) + "), largest growth per level " + fmt("%.2f", worst_growth) +
              "x, target <= 1.6x";
  return v;
}

Verdict criterion_ullmann(const IterationStudy& s) {
  Verdict v;
  std::string m, u;
  bool every = true;
  for (int l = 0; l < 7; ++l) {
    m += " " + std::to_string(s.mean_q4[l]);
    u += " " + std::to_string(s.ullmann_q4[l]);
    every = every && s.ullmann_q4[l] < s.mean_q4[l];
  }
  v.pass = s.ullmann_q4[6] < s.mean_q4[6] && s.all_converged;
  v.summary = "Q=4, h=2^-8: ullmann " + std::to_string(s.ullmann_q4[6]) + " < mean-based " +
              std::to_string(s.mean_q4[6]) + (v.pass ? "" : " does not hold");
  v.info.push_back("mean-based, h=2^-2..2^-8:" + m);
  v.info.push_back("ullmann,    h=2^-2..2^-8:" + u);
  v.info.push_back(std::string("ullmann below mean-based on every mesh: ") + (every ? "yes" : "no"));
  return v;
}

// ---------------------------------------------------------------------------
// Criteria 3 and 6: 2D sweeps.

Verdict criterion_control_rate(const std::string& out) {
  Verdict v;
  const ExperimentConfig c = load_config(SGBC_CONFIG_DIR "/square.json");
  const ConvergenceReport r = run_experiment(c);
  emit_reports(r, out + "/square");
  const SlopeFit* f = slope_for(r.control_slopes, 2);
  std::vector<double> e;
  for (const auto& cell : r.cells) e.push_back(cell.control_error);
  v.pass = f && f->valid && within(f->slope, 1.25, 1.75) && r.all_converged;
  v.summary = "control-error slope at Q=2 = " + (f && f->valid ? fmt("%.3f", f->slope) : std::string("n/a")) +
              ", target [1.25, 1.75]";
  v.info.push_back("control errors, h=2^-1..2^-5: " + row(e));
  if (f) v.info.push_back("fitted on " + std::to_string(f->h_used.size()) + " finest levels above 10x the reference contamination " + fmt("%.2e", f->contamination));
  v.info.push_back("pointwise coefficient minimum " + fmt("%.4f", r.positivity.sharp_min) +
                   ", Galerkin matrix minimum eigenvalue " + fmt("%.4f", r.galerkin.min_eigenvalue));
  return v;
}

Verdict criterion_constrained(const std::string& out) {
  Verdict v;
  const ExperimentConfig c = load_config(SGBC_CONFIG_DIR "/square_constrained.json");
  const ConvergenceReport r = run_experiment(c);
  emit_reports(r, out + "/square_constrained");
  const double ub = c.bounds->upper;
  int max_outer = 0;
  double max_u = -INFINITY, max_comp = 0.0;
  bool cells_ok = !r.cells.empty();
  for (const auto& cell : r.cells) {
    max_outer = std::max(max_outer, cell.pdas_outer);
    max_u = std::max(max_u, cell.max_control);
    max_comp = std::max(max_comp, cell.complementarity);
    cells_ok = cells_ok && cell.converged && cell.pdas_outer <= 15 && cell.max_control <= ub &&
               cell.complementarity <= 1e-10;
  }
  bool slopes_ok = !r.control_slopes.empty();
  std::string slopes;
  for (const auto& [q, f] : r.control_slopes) {
    slopes += (slopes.empty() ? "" : ", ") + std::string("Q=") + std::to_string(q) + " " +
              (f.valid ? fmt("%.3f", f.slope) : std::string("n/a"));
    slopes_ok = slopes_ok && f.valid && within(f.slope, 1.25, 1.75);
  }
  v.pass = cells_ok && slopes_ok;
  v.summary = "max PDAS outer " + std::to_string(max_outer) + " (<= 15), max u " + fmt("%.17g", max_u) +
              " (<= 0.2), complementarity " + fmt("%.1e", max_comp) + " (<= 1e-10), control slopes " + slopes +
              " (target [1.25, 1.75])";
  for (int q : c.degrees) {
    std::string line = "Q=" + std::to_string(q) + " outer/inner per level:";
    for (const auto& cell : r.cells)
      if (cell.degree == q) line += " " + std::to_string(cell.pdas_outer) + "/" + std::to_string(cell.pdas_inner_total);
    v.info.push_back(line);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 7: property checks against independent oracles.

struct Property {
  std::string name;
  bool pass;
  double value;
};

double tensor_expectation(int dim, int points, const std::function<double(const std::vector<double>&)>& f) {
  const double s3 = std::sqrt(3.0);
  const oracle::Rule r = oracle::gauss_legendre(points, -s3, s3);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> xi(static_cast<std::size_t>(dim));
  double sum = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t d = 0; d < idx.size(); ++d) {
      xi[d] = r.nodes[static_cast<std::size_t>(idx[d])];
      w *= r.weights[static_cast<std::size_t>(idx[d])] / (2.0 * s3);
    }
    sum += w * f(xi);
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == points) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return sum;
}

std::vector<Property> property_suite() {
  std::vector<Property> props;
  std::mt19937_64 rng(20240601);

  {
    const GpcBasis basis(MultiIndexSet(3, 4));
    double worst = 0.0;
    for (Index i = 0; i < basis.size(); ++i)
      for (Index j = i; j < basis.size(); ++j)
        worst = std::max(worst, std::abs(tensor_expectation(3, 6, [&](const std::vector<double>& x) {
                                           return basis.eval(i, x) * basis.eval(j, x);
                                         }) - (i == j ? 1.0 : 0.0)));
    props.push_back({"gPC orthonormality (N=3, Q=4), max deviation", worst <= 1e-12, worst});

    const StochasticMoments m = assemble_moments(basis);
    double asym = 0.0;
    bool sparse = true;
    for (const auto& p : m.P) {
      const DenseMatrix d(p);
      asym = std::max(asym, (d - d.transpose()).cwiseAbs().maxCoeff());
      for (Index r = 0; r < d.rows(); ++r) sparse = sparse && (d.row(r).array() != 0.0).count() <= 2;
    }
    props.push_back({"P_k symmetric with <= 2 entries per row, max asymmetry", asym == 0.0 && sparse, asym});
  }
  {
    double worst = 0.0;
    for (double ell : {1.0, 0.9}) {
      const auto pairs = solve_1d_eigenpairs(ell, 0.0, 1.0, 10);
      for (const auto& p : pairs)
        for (int i = 0; i < 1000; ++i) {
          const double x = (i + 0.5) / 1000.0;
          auto f = [&](double y) { return std::exp(-std::abs(x - y) / ell) * p(y); };
          const double kw = oracle::integrate(f, 0.0, x, 16, 12) + oracle::integrate(f, x, 1.0, 16, 12);
          worst = std::max(worst, std::abs(kw - p.lambda * p(x)));
        }
    }
    props.push_back({"KL Fredholm residual vs split-panel Nystrom oracle", worst < 1e-8, worst});
  }
  {
    testing::Problem pr(testing::small_interval(2), build_interval_mesh(0.125), 2);
    const SgSystem& sg = pr.sg();
    const FemMatrices fem = assemble_fem(pr.disc->mesh(), pr.fields.diffusion);
    const StochasticMoments m = assemble_moments(pr.disc->basis());
    const DofRange in = dof_range(pr.disc->mesh(), Part::interior);
    auto ii = [&](const SparseMatrix& a) { return DenseMatrix(a).block(in.offset, in.offset, in.size, in.size).eval(); };
    DenseMatrix k = oracle::kron(DenseMatrix(m.Pbar), ii(fem.Kbar));
    for (std::size_t t = 0; t < fem.K.size(); ++t) k += oracle::kron(DenseMatrix(m.P[t]), ii(fem.K[t]));
    const DenseMatrix perm = oracle::mode_to_node_major(sg.n_interior, sg.n_modes);
    const DenseMatrix expect = perm * k * perm.transpose();
    const double diff = (sg.K_II.materialize() - expect).cwiseAbs().maxCoeff() / expect.cwiseAbs().maxCoeff();
    props.push_back({"Kronecker stiffness vs materialized oracle (" + std::to_string(sg.K_II.rows()) +
                         " unknowns), relative max difference",
                     sg.K_II.rows() <= 200 && diff <= 1e-12, diff});
  }
  {
    testing::Problem pr(testing::small_square(3), build_square_mesh(1), 2);
    const SaddleOperator op(pr.sg());
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Vector x = oracle::random_vector(op.size(), rng), y = oracle::random_vector(op.size(), rng);
      Vector ax, ay;
      op.apply(x, ax);
      op.apply(y, ay);
      worst = std::max(worst, std::abs(ax.dot(y) - x.dot(ay)) / (ax.norm() * y.norm()));
    }
    props.push_back({"saddle operator symmetry on 20 random pairs", worst <= 1e-13, worst});

    const SgSystem& sg = pr.sg();
    const SparseLdlt kbar(sg.Kbar_II);
    const Vector u = oracle::random_vector(sg.n_boundary, rng);
    const ReducedGradient g = reduced_gradient(sg, kbar, u);
    auto j = [&](const Vector& v) {
      RowMatrix y;
      solve_stiffness(sg, kbar, state_rhs(sg, v), y);
      return evaluate_objective(sg, y, v);
    };
    Vector fd(sg.n_boundary);
    for (Index r = 0; r < sg.n_boundary; ++r) {
      Vector up = u, dn = u;
      up[r] += 1e-4;
      dn[r] -= 1e-4;
      fd[r] = (j(up) - j(dn)) / 2e-4;
    }
    const double rel = (fd - g.gradient).norm() / g.gradient.norm();
    props.push_back({"reduced gradient vs central differences, relative", rel <= 1e-6, rel});
  }
  {
    testing::Problem pr(testing::small_square(3), build_square_mesh(2), 2);
    const SgSystem& sg = pr.sg();
    const BlockPreconditioner p(sg, PreconditionerVariant::mean_based);
    Vector x;
    minres(SaddleOperator(sg), saddle_rhs(sg), p, x, {1e-12, 1000});
    const Vector free = x.segment(sg.block_size(), sg.n_boundary);
    const BoxBounds b{-INFINITY, 0.5 * (free.minCoeff() + free.maxCoeff())};
    PdasSettings s;
    s.inner = {1e-11, 1000};
    const PdasResult r1 = pdas_solve(sg, p, b, s);
    double diff = INFINITY;
    bool same = false;
    for (double scale : {1.0, 10.0, 100.0}) {
      s.sigma = scale * sg.alpha;
      const PdasResult r = pdas_solve(sg, p, b, s);
      same = r1.converged && r.converged && r.sets == r1.sets;
      diff = (r.u - r1.u).norm();
      if (!same || diff > 1e-8) break;
    }
    props.push_back({"PDAS fixed point for sigma = alpha, 10 alpha, 100 alpha, control difference",
                     same && diff <= 1e-8, diff});
  }
  {
    testing::Problem pr(testing::small_interval(2, 0.5), build_interval_mesh(0.125), 4);
    const SgSystem& sg = pr.sg();
    const Mesh& mesh = pr.disc->mesh();
    const Vector u = (Vector(2) << 0.3, -0.2).finished();
    RowMatrix y0;
    solve_stiffness(sg, SparseLdlt(sg.Kbar_II), state_rhs(sg, u), y0);
    const MeanVariance mv = expectation_and_variance(sg, y0, u);
    const FemMatrices fem = assemble_fem(mesh, pr.fields.diffusion);
    const LoadVectors loads = assemble_loads(mesh, pr.fields.source, pr.fields.desired_state);
    const Index ni = mesh.n_interior;
    std::uniform_real_distribution<double> xi(-std::sqrt(3.0), std::sqrt(3.0));
    const int n = 10000;
    DenseMatrix samples(n, ni);
    for (int s = 0; s < n; ++s) {
      const double x1 = xi(rng), x2 = xi(rng);
      const DenseMatrix k = DenseMatrix(fem.Kbar) + x1 * DenseMatrix(fem.K[0]) + x2 * DenseMatrix(fem.K[1]);
      const Vector f = loads.fbar + x1 * loads.f[0] + x2 * loads.f[1];
      samples.row(s) = k.topLeftCorner(ni, ni).llt().solve(f.head(ni) - k.topRightCorner(ni, 2) * u).transpose();
    }
    double worst = 0.0;
    for (Index i = 0; i < ni; ++i) {
      const Vector c = samples.col(i).array() - samples.col(i).mean();
      const double var = c.squaredNorm() / (n - 1);
      const double m4 = c.array().pow(4).mean();
      const double se_mean = std::sqrt(var / n);
      const double se_var = std::sqrt((m4 - var * var) / n);
      worst = std::max(worst, std::abs(mv.mean[i] - samples.col(i).mean()) / se_mean);
      worst = std::max(worst, std::abs(mv.variance[i] - var) / se_var);
    }
    props.push_back({"E/Var vs 10^4-sample Monte Carlo, worst deviation in standard errors", worst <= 3.0, worst});
  }
  return props;
}

Verdict criterion_properties() {
  Verdict v;
  const std::vector<Property> props = property_suite();
  int failed = 0;
  for (const auto& p : props) {
    if (!p.pass) ++failed;
    v.info.push_back(std::string(p.pass ? "ok   " : "FAIL ") + p.name + ": " + fmt("%.3e", p.value));
  }
  v.pass = failed == 0;
  v.summary = std::to_string(props.size() - static_cast<std::size_t>(failed)) + " of " +
              std::to_string(props.size()) + " properties hold";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the stochastic Galerkin boundary control solver"};
  std::string out = "acceptance_out";
  std::vector<int> only;
  app.add_option("--out", out, "Directory for the reports of each study");
  app.add_option("--only", only, "Run only the listed criteria (1-7)")->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7} : std::set<int>(only.begin(), only.end());
  auto want = [&](int id) { return selected.count(id) > 0; };

  std::filesystem::create_directories(out);
  std::cout << "kernels: " << simd::name(simd::kernels().isa) << "\n";
  try {
    if (want(1) || want(2)) {
      const auto t0 = Clock::now();
      const IntervalStudy s = run_interval(out);
      const double secs = seconds_since(t0);
      if (want(1)) print(1, "1D spatial rate", criterion_spatial_rate(s), secs, 120.0);
      if (want(2)) print(2, "1D stochastic rate", criterion_stochastic_rate(s), secs, 120.0);
    }
    if (want(3)) {
      const auto t0 = Clock::now();
      const Verdict v = criterion_control_rate(out);
      print(3, "2D control rate", v, seconds_since(t0), 600.0);
    }
    if (want(4) || want(5)) {
      const IterationStudy s = run_iterations();
      if (want(4)) print(4, "preconditioner robustness", criterion_robustness(s), s.table_seconds, 300.0);
      if (want(5)) print(5, "Ullmann improvement", criterion_ullmann(s), s.comparison_seconds, 60.0);
    }
    if (want(6)) {
      const auto t0 = Clock::now();
      const Verdict v = criterion_constrained(out);
      print(6, "constrained problem", v, seconds_since(t0), 900.0);
    }
    if (want(7)) {
      const auto t0 = Clock::now();
      const Verdict v = criterion_properties();
      print(7, "property suite", v, seconds_since(t0), 60.0);
    }
  } catch (const Error& e) {
    std::cout << "FAIL  acceptance run aborted: " << e.what() << '\n';
    return 100;
  }
  std::cout << (failures == 0 ? "all selected criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures;
}
