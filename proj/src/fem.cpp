#include "sgbc/fem.hpp"

#include <cmath>

namespace sgbc {

namespace {

int dof(const Mesh& mesh, int vertex) { return mesh.dof_of_vertex[static_cast<std::size_t>(vertex)]; }

const Point& vertex(const Mesh& mesh, int v) { return mesh.vertices[static_cast<std::size_t>(v)]; }

SparseMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& triplets) {
  // Eigen sums duplicates in insertion order, which is the element order.
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

// Gradients of the three barycentric coordinates of a triangle.
std::array<std::array<double, 2>, 3> gradients(const Point& a, const Point& b, const Point& c, double& area) {
  const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
  area = 0.5 * std::abs(det);
  return {{{(b[1] - c[1]) / det, (c[0] - b[0]) / det},
           {(c[1] - a[1]) / det, (a[0] - c[0]) / det},
           {(a[1] - b[1]) / det, (b[0] - a[0]) / det}}};
}

constexpr double kGauss3[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGauss3W[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

}  // namespace

DofRange dof_range(const Mesh& mesh, Part part) {
  return part == Part::interior ? DofRange{0, mesh.n_interior} : DofRange{mesh.n_interior, mesh.n_boundary};
}

SparseMatrix sub_block(const Mesh& mesh, const SparseMatrix& m, Part rows, Part cols) {
  const DofRange r = dof_range(mesh, rows);
  const DofRange c = dof_range(mesh, cols);
  if (m.rows() != mesh.n_vertices() || m.cols() != mesh.n_vertices())
    throw DimensionError("sub_block: matrix is not indexed by the mesh dofs");
  SparseMatrix out = m.block(r.offset, c.offset, r.size, c.size);
  out.makeCompressed();
  return out;
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& coeff) {
  std::vector<Triplet> t;
  const Index n = mesh.n_vertices();
  if (mesh.dim == 1) {
    t.reserve(mesh.cells.size() * 4);
    for (const auto& c : mesh.cells) {
      const Point& a = vertex(mesh, c[0]);
      const Point& b = vertex(mesh, c[1]);
      const double len = std::abs(b[0] - a[0]);
      const double k = coeff({0.5 * (a[0] + b[0]), 0.0}) / len;
      const int i = dof(mesh, c[0]);
      const int j = dof(mesh, c[1]);
      t.emplace_back(i, i, k);
      t.emplace_back(j, j, k);
      t.emplace_back(i, j, -k);
      t.emplace_back(j, i, -k);
    }
    return from_triplets(n, n, t);
  }
  t.reserve(mesh.cells.size() * 9);
  for (const auto& c : mesh.cells) {
    const Point& a = vertex(mesh, c[0]);
    const Point& b = vertex(mesh, c[1]);
    const Point& p = vertex(mesh, c[2]);
    double area = 0.0;
    const auto g = gradients(a, b, p, area);
    const double k = coeff({(a[0] + b[0] + p[0]) / 3.0, (a[1] + b[1] + p[1]) / 3.0}) * area;
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s)
        t.emplace_back(dof(mesh, c[static_cast<std::size_t>(r)]), dof(mesh, c[static_cast<std::size_t>(s)]),
                       k * (g[static_cast<std::size_t>(r)][0] * g[static_cast<std::size_t>(s)][0] +
                            g[static_cast<std::size_t>(r)][1] * g[static_cast<std::size_t>(s)][1]));
  }
  return from_triplets(n, n, t);
}

SparseMatrix assemble_mass(const Mesh& mesh) {
  std::vector<Triplet> t;
  const Index n = mesh.n_vertices();
  const int nv = mesh.vertices_per_cell();
  // Element mass: |T| (1 + delta_rs) / ((d+1)(d+2)).
  const double denom = (mesh.dim + 1.0) * (mesh.dim + 2.0);
  for (Index e = 0; e < mesh.n_cells(); ++e) {
    const auto& c = mesh.cells[static_cast<std::size_t>(e)];
    const double measure = mesh.cell_measure(e);
    for (int r = 0; r < nv; ++r)
      for (int s = 0; s < nv; ++s)
        t.emplace_back(dof(mesh, c[static_cast<std::size_t>(r)]), dof(mesh, c[static_cast<std::size_t>(s)]),
                       measure * (r == s ? 2.0 : 1.0) / denom);
  }
  return from_triplets(n, n, t);
}

SparseMatrix assemble_boundary_mass(const Mesh& mesh) {
  const Index nb = mesh.n_boundary;
  std::vector<Triplet> t;
  if (mesh.dim == 1) {
    for (Index r = 0; r < nb; ++r) t.emplace_back(static_cast<int>(r), static_cast<int>(r), 1.0);
    return from_triplets(nb, nb, t);
  }
  for (const auto& f : mesh.boundary_facets) {
    const int i = dof(mesh, f[0]) - static_cast<int>(mesh.n_interior);
    const int j = dof(mesh, f[1]) - static_cast<int>(mesh.n_interior);
    const Point& a = vertex(mesh, f[0]);
    const Point& b = vertex(mesh, f[1]);
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    t.emplace_back(i, i, len / 3.0);
    t.emplace_back(j, j, len / 3.0);
    t.emplace_back(i, j, len / 6.0);
    t.emplace_back(j, i, len / 6.0);
  }
  return from_triplets(nb, nb, t);
}

Vector assemble_load(const Mesh& mesh, const ScalarField& g) {
  Vector out = Vector::Zero(mesh.n_vertices());
  if (mesh.dim == 1) {
    const double q = 0.5 / std::sqrt(3.0);
    for (const auto& c : mesh.cells) {
      const double a = vertex(mesh, c[0])[0];
      const double b = vertex(mesh, c[1])[0];
      const double len = std::abs(b - a);
      for (double s : {0.5 - q, 0.5 + q}) {
        const double w = 0.5 * len * g({a + s * (b - a), 0.0});
        out[dof(mesh, c[0])] += w * (1.0 - s);
        out[dof(mesh, c[1])] += w * s;
      }
    }
    return out;
  }
  constexpr double bary[3][3] = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                                 {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                                 {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
  for (Index e = 0; e < mesh.n_cells(); ++e) {
    const auto& c = mesh.cells[static_cast<std::size_t>(e)];
    const double area = mesh.cell_measure(e);
    for (const auto& l : bary) {
      Point x{0.0, 0.0};
      for (int r = 0; r < 3; ++r) {
        const Point& v = vertex(mesh, c[static_cast<std::size_t>(r)]);
        x[0] += l[r] * v[0];
        x[1] += l[r] * v[1];
      }
      const double w = area / 3.0 * g(x);
      for (int r = 0; r < 3; ++r) out[dof(mesh, c[static_cast<std::size_t>(r)])] += w * l[r];
    }
  }
  return out;
}

Vector assemble_boundary_load(const Mesh& mesh, const std::function<double(double)>& g) {
  Vector out = Vector::Zero(mesh.n_boundary);
  if (mesh.dim == 1) {
    for (Index r = 0; r < mesh.n_boundary; ++r) out[r] = g(boundary_arclength(mesh, mesh.boundary_vertex(r)));
    return out;
  }
  for (const auto& f : mesh.boundary_facets) {
    const Index i = dof(mesh, f[0]) - mesh.n_interior;
    const Index j = dof(mesh, f[1]) - mesh.n_interior;
    const Point& a = vertex(mesh, f[0]);
    const Point& b = vertex(mesh, f[1]);
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    for (int q = 0; q < 3; ++q) {
      const double t = 0.5 * (1.0 + kGauss3[q]);
      const Point x{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
      const double w = 0.5 * len * kGauss3W[q] * g(boundary_arclength(2, x));
      out[i] += w * (1.0 - t);
      out[j] += w * t;
    }
  }
  return out;
}

Vector project_boundary_field(const Mesh& mesh, const std::function<double(double)>& g) {
  const SparseMatrix mb = assemble_boundary_mass(mesh);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(mb);
  if (ldlt.info() != Eigen::Success) throw NumericalError("boundary mass matrix is singular");
  return ldlt.solve(assemble_boundary_load(mesh, g));
}

FemMatrices assemble_fem(const Mesh& mesh, const KlField& diffusion) {
  FemMatrices fem;
  fem.Kbar = assemble_stiffness(mesh, diffusion.mean_function());
  for (int k = 0; k < diffusion.modes(); ++k) fem.K.push_back(assemble_stiffness(mesh, diffusion.mode_function(k)));
  fem.M = assemble_mass(mesh);
  fem.Mboundary = assemble_boundary_mass(mesh);
  return fem;
}

LoadVectors assemble_loads(const Mesh& mesh, const KlField& source, const ScalarField& desired_state) {
  LoadVectors loads;
  loads.fbar = assemble_load(mesh, source.mean_function());
  for (int k = 0; k < source.modes(); ++k) loads.f.push_back(assemble_load(mesh, source.mode_function(k)));
  loads.yd = assemble_load(mesh, desired_state);
  return loads;
}

}  // namespace sgbc
