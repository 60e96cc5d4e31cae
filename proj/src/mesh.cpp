#include "sgbc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

namespace sgbc {

namespace {

using Edge = std::pair<int, int>;

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

double dist2(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

// Facets, boundary flags and the interior-first dof numbering.
void finalize(Mesh& m) {
  const auto nv = static_cast<std::size_t>(m.n_vertices());
  m.on_boundary.assign(nv, 0);
  m.boundary_facets.clear();
  if (m.dim == 1) {
    std::vector<int> count(nv, 0);
    for (const auto& c : m.cells) {
      ++count[static_cast<std::size_t>(c[0])];
      ++count[static_cast<std::size_t>(c[1])];
    }
    for (std::size_t v = 0; v < nv; ++v)
      if (count[v] == 1) {
        m.on_boundary[v] = 1;
        m.boundary_facets.push_back({static_cast<int>(v), -1});
      }
  } else {
    std::map<Edge, int> count;
    for (const auto& c : m.cells)
      for (int e = 0; e < 3; ++e) ++count[make_edge(c[static_cast<std::size_t>(e)], c[static_cast<std::size_t>((e + 1) % 3)])];
    for (const auto& [edge, n] : count) {
      if (n > 2) throw Error("mesh edge shared by more than two cells");
      if (n == 1) {
        m.boundary_facets.push_back({edge.first, edge.second});
        m.on_boundary[static_cast<std::size_t>(edge.first)] = 1;
        m.on_boundary[static_cast<std::size_t>(edge.second)] = 1;
      }
    }
  }
  std::vector<int> interior;
  std::vector<int> boundary;
  for (std::size_t v = 0; v < nv; ++v) (m.on_boundary[v] ? boundary : interior).push_back(static_cast<int>(v));
  std::stable_sort(boundary.begin(), boundary.end(), [&m](int a, int b) {
    return boundary_arclength(m, a) < boundary_arclength(m, b);
  });
  m.n_interior = static_cast<Index>(interior.size());
  m.n_boundary = static_cast<Index>(boundary.size());
  m.vertex_of_dof = interior;
  m.vertex_of_dof.insert(m.vertex_of_dof.end(), boundary.begin(), boundary.end());
  m.dof_of_vertex.assign(nv, -1);
  for (std::size_t d = 0; d < nv; ++d) m.dof_of_vertex[static_cast<std::size_t>(m.vertex_of_dof[d])] = static_cast<int>(d);
}

int add_midpoint(Mesh& m, std::map<Edge, int>& midpoints, int a, int b) {
  const Edge e = make_edge(a, b);
  if (auto it = midpoints.find(e); it != midpoints.end()) return it->second;
  const Point& pa = m.vertices[static_cast<std::size_t>(e.first)];
  const Point& pb = m.vertices[static_cast<std::size_t>(e.second)];
  const int id = static_cast<int>(m.vertices.size());
  m.vertices.push_back({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])});
  m.vertex_origin.push_back({e.first, e.second});
  midpoints.emplace(e, id);
  return id;
}

// Local index e of the edge (c[e], c[e+1]) to bisect: the longest one, ties
// going to the edge with the lexicographically smallest sorted vertex pair.
int longest_edge(const Mesh& m, const std::array<int, 3>& c) {
  int best = 0;
  double best_len = -1.0;
  Edge best_key{};
  for (int e = 0; e < 3; ++e) {
    const int a = c[static_cast<std::size_t>(e)];
    const int b = c[static_cast<std::size_t>((e + 1) % 3)];
    const double len = dist2(m.vertices[static_cast<std::size_t>(a)], m.vertices[static_cast<std::size_t>(b)]);
    const Edge key = make_edge(a, b);
    const double tol = 1e-12 * std::max(len, best_len);
    if (len > best_len + tol || (std::abs(len - best_len) <= tol && key < best_key)) {
      best = e;
      best_len = len;
      best_key = key;
    }
  }
  return best;
}

// Splits c across local edge e, keeping orientation.
std::array<std::array<int, 3>, 2> split(const std::array<int, 3>& c, int e, int mid) {
  const int a = c[static_cast<std::size_t>(e)];
  const int b = c[static_cast<std::size_t>((e + 1) % 3)];
  const int r = c[static_cast<std::size_t>((e + 2) % 3)];
  return {{{a, mid, r}, {mid, b, r}}};
}

void bisection_sweep(Mesh& m) {
  std::map<Edge, int> midpoints;
  std::vector<std::array<int, 3>> next;
  next.reserve(m.cells.size() * 2);
  for (const auto& c : m.cells) {
    const int e = longest_edge(m, c);
    const int mid = add_midpoint(m, midpoints, c[static_cast<std::size_t>(e)], c[static_cast<std::size_t>((e + 1) % 3)]);
    for (const auto& child : split(c, e, mid)) next.push_back(child);
  }
  // Closure: a cell still holding an edge that was split elsewhere is
  // bisected across that edge until the mesh is conforming.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::array<int, 3>> closed;
    closed.reserve(next.size());
    for (const auto& c : next) {
      int hanging = -1;
      int mid = -1;
      for (int e = 0; e < 3 && hanging < 0; ++e) {
        auto it = midpoints.find(make_edge(c[static_cast<std::size_t>(e)], c[static_cast<std::size_t>((e + 1) % 3)]));
        if (it != midpoints.end()) {
          hanging = e;
          mid = it->second;
        }
      }
      if (hanging < 0) {
        closed.push_back(c);
      } else {
        for (const auto& child : split(c, hanging, mid)) closed.push_back(child);
        changed = true;
      }
    }
    next.swap(closed);
  }
  m.cells.swap(next);
}

std::shared_ptr<Mesh> child_of(const MeshPtr& parent) {
  auto m = std::make_shared<Mesh>();
  m->dim = parent->dim;
  m->vertices = parent->vertices;
  m->cells = parent->cells;
  m->parent = parent;
  m->level = parent->level + 1;
  m->h = parent->h * 0.5;
  m->vertex_origin.resize(m->vertices.size());
  for (std::size_t v = 0; v < m->vertices.size(); ++v) m->vertex_origin[v] = {static_cast<int>(v), static_cast<int>(v)};
  return m;
}

}  // namespace

double Mesh::cell_measure(Index c) const {
  const auto& cell = cells[static_cast<std::size_t>(c)];
  const Point& a = vertices[static_cast<std::size_t>(cell[0])];
  const Point& b = vertices[static_cast<std::size_t>(cell[1])];
  if (dim == 1) return std::abs(b[0] - a[0]);
  const Point& p = vertices[static_cast<std::size_t>(cell[2])];
  return 0.5 * std::abs((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1]));
}

MeshPtr refine(const MeshPtr& mesh) {
  auto m = child_of(mesh);
  if (m->dim == 1) {
    std::map<Edge, int> midpoints;
    std::vector<std::array<int, 3>> next;
    for (const auto& c : m->cells) {
      const int mid = add_midpoint(*m, midpoints, c[0], c[1]);
      next.push_back({c[0], mid, -1});
      next.push_back({mid, c[1], -1});
    }
    m->cells.swap(next);
  } else {
    bisection_sweep(*m);
    bisection_sweep(*m);
  }
  finalize(*m);
  return m;
}

MeshPtr build_interval_mesh(double h) {
  if (!(h > 0.0) || h > 1.0) throw ConfigError("interval mesh size must lie in (0, 1]");
  const double inv = 1.0 / h;
  const long n = std::lround(inv);
  if (n < 1 || std::abs(inv - static_cast<double>(n)) > 1e-9 * inv)
    throw ConfigError("interval mesh needs 1/h to be an integer");
  if ((n & (n - 1)) == 0) {
    auto root = std::make_shared<Mesh>();
    root->dim = 1;
    root->h = 1.0;
    root->vertices = {{0.0, 0.0}, {1.0, 0.0}};
    root->cells = {{0, 1, -1}};
    root->vertex_origin = {{0, 0}, {1, 1}};
    finalize(*root);
    MeshPtr m = root;
    while (m->n_cells() < n) m = refine(m);
    return m;
  }
  auto m = std::make_shared<Mesh>();
  m->dim = 1;
  m->h = 1.0 / static_cast<double>(n);
  for (long i = 0; i <= n; ++i) m->vertices.push_back({static_cast<double>(i) / static_cast<double>(n), 0.0});
  for (long i = 0; i < n; ++i) m->cells.push_back({static_cast<int>(i), static_cast<int>(i + 1), -1});
  m->vertex_origin.resize(m->vertices.size());
  for (std::size_t v = 0; v < m->vertices.size(); ++v) m->vertex_origin[v] = {static_cast<int>(v), static_cast<int>(v)};
  finalize(*m);
  return m;
}

MeshPtr build_square_mesh(int level) {
  if (level < 0) throw ConfigError("mesh level must be non-negative");
  auto root = std::make_shared<Mesh>();
  root->dim = 2;
  root->h = 1.0;
  root->vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}};
  root->cells = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  for (int v = 0; v < 5; ++v) root->vertex_origin.push_back({v, v});
  finalize(*root);
  MeshPtr m = root;
  for (int l = 0; l < level; ++l) m = refine(m);
  return m;
}

double boundary_arclength(int dim, const Point& p) {
  if (dim == 1) return p[0];
  constexpr double tol = 1e-12;
  const double x = p[0];
  const double y = p[1];
  if (std::abs(y) <= tol) return 0.25 * x;
  if (std::abs(x - 1.0) <= tol) return 0.25 * (1.0 + y);
  if (std::abs(y - 1.0) <= tol) return 0.25 * (2.0 + (1.0 - x));
  if (std::abs(x) <= tol) return 0.25 * (3.0 + (1.0 - y));
  throw Error("boundary_arclength: point is not on the boundary of the unit square");
}

double boundary_arclength(const Mesh& mesh, int vertex) {
  if (!mesh.on_boundary.at(static_cast<std::size_t>(vertex)))
    throw Error("boundary_arclength: vertex " + std::to_string(vertex) + " is an interior node");
  return boundary_arclength(mesh.dim, mesh.vertices.at(static_cast<std::size_t>(vertex)));
}

bool is_nested_refinement(const Mesh& coarse, const Mesh& fine) {
  for (const Mesh* m = &fine; m != nullptr; m = m->parent.get())
    if (m == &coarse) return true;
  return false;
}

namespace {

// Vertex-ordered values on `fine` from vertex-ordered values on its parent.
RowMatrix prolong_one(const Mesh& fine, const RowMatrix& parent_values) {
  const Index np = parent_values.rows();
  RowMatrix out(fine.n_vertices(), parent_values.cols());
  out.topRows(np) = parent_values;
  for (Index v = np; v < fine.n_vertices(); ++v) {
    const auto& o = fine.vertex_origin[static_cast<std::size_t>(v)];
    out.row(v) = 0.5 * (out.row(o[0]) + out.row(o[1]));
  }
  return out;
}

}  // namespace

RowMatrix prolong_nodal(const Mesh& coarse, const Mesh& fine, const RowMatrix& coarse_values) {
  if (coarse_values.rows() != coarse.n_vertices())
    throw DimensionError("prolongation input does not match the coarse mesh");
  if (!is_nested_refinement(coarse, fine)) throw Error("prolongation: meshes are not nested");
  std::vector<const Mesh*> chain;
  for (const Mesh* m = &fine; m != &coarse; m = m->parent.get()) chain.push_back(m);
  RowMatrix values(coarse.n_vertices(), coarse_values.cols());
  for (Index d = 0; d < coarse.n_vertices(); ++d)
    values.row(coarse.vertex_of_dof[static_cast<std::size_t>(d)]) = coarse_values.row(d);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) values = prolong_one(**it, values);
  RowMatrix out(fine.n_vertices(), coarse_values.cols());
  for (Index d = 0; d < fine.n_vertices(); ++d) out.row(d) = values.row(fine.vertex_of_dof[static_cast<std::size_t>(d)]);
  return out;
}

Vector prolong_boundary(const Mesh& coarse, const Mesh& fine, const Vector& coarse_boundary) {
  if (coarse_boundary.size() != coarse.n_boundary)
    throw DimensionError("boundary prolongation input does not match the coarse mesh");
  // New boundary vertices are midpoints of boundary edges, so interior values
  // never enter the boundary result.
  RowMatrix full = RowMatrix::Zero(coarse.n_vertices(), 1);
  full.bottomRows(coarse.n_boundary) = coarse_boundary;
  const RowMatrix fine_full = prolong_nodal(coarse, fine, full);
  return fine_full.bottomRows(fine.n_boundary);
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os.precision(17);
  os << "# sgbc mesh v1\n";
  os << "dimension " << mesh.dim << "\n";
  os << "vertices " << mesh.n_vertices() << "\n";
  for (const auto& p : mesh.vertices) {
    os << p[0];
    if (mesh.dim == 2) os << ' ' << p[1];
    os << "\n";
  }
  os << "cells " << mesh.n_cells() << "\n";
  for (const auto& c : mesh.cells) {
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) os << (k ? " " : "") << c[static_cast<std::size_t>(k)];
    os << "\n";
  }
  os << "boundary_facets " << mesh.boundary_facets.size() << "\n";
  for (const auto& f : mesh.boundary_facets) {
    os << f[0];
    if (mesh.dim == 2) os << ' ' << f[1];
    os << "\n";
  }
  os << "interior_dofs " << mesh.n_interior << "\n";
  os << "dof_to_vertex";
  for (int v : mesh.vertex_of_dof) os << ' ' << v;
  os << "\n";
}

void validate_mesh(const Mesh& mesh) {
  const auto nv = static_cast<std::size_t>(mesh.n_vertices());
  if (mesh.vertex_of_dof.size() != nv || mesh.dof_of_vertex.size() != nv)
    throw Error("mesh numbering has the wrong size");
  std::vector<char> seen(nv, 0);
  for (std::size_t d = 0; d < nv; ++d) {
    const int v = mesh.vertex_of_dof[d];
    if (v < 0 || static_cast<std::size_t>(v) >= nv || seen[static_cast<std::size_t>(v)])
      throw Error("dof numbering is not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
    if (mesh.dof_of_vertex[static_cast<std::size_t>(v)] != static_cast<int>(d)) throw Error("dof maps disagree");
    const bool boundary = static_cast<Index>(d) >= mesh.n_interior;
    if (boundary != static_cast<bool>(mesh.on_boundary[static_cast<std::size_t>(v)]))
      throw Error("dof numbering is not interior-first");
  }
  if (mesh.dim == 2) {
    std::map<Edge, int> count;
    for (const auto& c : mesh.cells)
      for (int e = 0; e < 3; ++e) ++count[make_edge(c[static_cast<std::size_t>(e)], c[static_cast<std::size_t>((e + 1) % 3)])];
    std::size_t boundary_edges = 0;
    for (const auto& [edge, n] : count) {
      if (n < 1 || n > 2) throw Error("edge with invalid cell count");
      if (n == 1) ++boundary_edges;
      const bool bnd = mesh.on_boundary[static_cast<std::size_t>(edge.first)] &&
                       mesh.on_boundary[static_cast<std::size_t>(edge.second)];
      if (n == 1 && !bnd) throw Error("boundary edge with interior endpoint");
    }
    if (boundary_edges != mesh.boundary_facets.size()) throw Error("boundary facet list is inconsistent");
    // Boundary vertices must lie on the square boundary.
    for (std::size_t v = 0; v < nv; ++v)
      if (mesh.on_boundary[v]) (void)boundary_arclength(mesh, static_cast<int>(v));
  }
  if (mesh.parent) {
    const auto np = mesh.parent->vertices.size();
    for (std::size_t v = 0; v < np; ++v)
      if (dist2(mesh.vertices[v], mesh.parent->vertices[v]) > 1e-24) throw Error("refinement is not nested");
  }
}

}  // namespace sgbc
