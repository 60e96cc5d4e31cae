#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

#include "sgbc/common.hpp"
#include "sgbc/random_fields.hpp"

namespace sgbc {

/// Simplicial mesh of [0,1] (intervals) or [0,1]^2 (triangles).
///
/// Degrees of freedom are numbered interior first: dofs [0, n_interior) are
/// interior vertices in vertex order, dofs [n_interior, n_vertices) are
/// boundary vertices sorted by normalized arclength.
struct Mesh {
  int dim = 0;
  double h = 0.0;  // nominal mesh size
  int level = 0;   // refinement level within its family
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;           // 1D cells use the first two entries
  std::vector<std::array<int, 2>> boundary_facets; // 1D facets are single vertices {v, -1}
  std::vector<char> on_boundary;
  std::vector<int> dof_of_vertex;
  std::vector<int> vertex_of_dof;
  Index n_interior = 0;
  Index n_boundary = 0;

  /// Mesh this one refines, if any. Vertices [0, parent->vertices.size())
  /// are the parent's vertices; every later vertex v is the midpoint of
  /// vertex_origin[v] = {a, b} with a, b < v (ids in this mesh).
  std::shared_ptr<const Mesh> parent;
  std::vector<std::array<int, 2>> vertex_origin;

  Index n_vertices() const { return static_cast<Index>(vertices.size()); }
  Index n_cells() const { return static_cast<Index>(cells.size()); }
  int vertices_per_cell() const { return dim + 1; }
  double cell_measure(Index c) const;
  /// Vertex id of boundary dof r (0-based within the boundary block).
  int boundary_vertex(Index r) const { return vertex_of_dof[static_cast<std::size_t>(n_interior + r)]; }
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Uniform mesh of [0,1] with 1/h cells. When 1/h is a power of two the mesh
/// is built by repeated refinement of the one-cell mesh, so meshes of the
/// family are nested and carry their lineage.
MeshPtr build_interval_mesh(double h);

/// Level 0: four triangles with bases on the sides of the unit square and
/// apex (1/2, 1/2). Each further level applies two sweeps of longest-edge
/// bisection to every triangle.
MeshPtr build_square_mesh(int level);

/// One level of refinement (interval: split every cell; square: two sweeps).
MeshPtr refine(const MeshPtr& mesh);

/// Normalized arclength of a boundary vertex: for the unit square, start at
/// (0,0) and run counter-clockwise with perimeter 4; for [0,1], s = x.
double boundary_arclength(const Mesh& mesh, int vertex);

/// Same convention for an arbitrary point on the boundary (dim 1 or 2).
double boundary_arclength(int dim, const Point& x);

/// True when `fine` descends from `coarse` through the parent chain.
bool is_nested_refinement(const Mesh& coarse, const Mesh& fine);

/// Nodal interpolation of a piecewise-linear function (rows indexed by dof,
/// columns independent) from `coarse` to the nested mesh `fine`.
RowMatrix prolong_nodal(const Mesh& coarse, const Mesh& fine, const RowMatrix& coarse_values);

/// Same for boundary coefficient vectors (boundary dof ordering).
Vector prolong_boundary(const Mesh& coarse, const Mesh& fine, const Vector& coarse_boundary);

/// Plain-text mesh dump: vertices, cells, boundary facets and dof order.
void write_mesh(std::ostream& os, const Mesh& mesh);

/// Checks the facet/numbering invariants, throwing Error on violation.
void validate_mesh(const Mesh& mesh);

}  // namespace sgbc
