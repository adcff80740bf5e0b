#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "bpfem/geometry.hpp"

namespace bpfem {

// Structured triangulations and quadrilateral meshes of the unit square.
// All families are parameterized by n, the number of grid points per side,
// so the mesh width is h = 1/(n-1).
enum class MeshFamily {
  TriAlt,        // diagonals alternate checkerboard-wise
  TriUniform,    // all diagonals lower-left to upper-right
  TriPerturbed,  // TriUniform with odd-parity interior vertices shifted in x
  Quad,          // axis-aligned squares
};

MeshFamily mesh_family_from_string(std::string_view name);
std::string_view to_string(MeshFamily family);

enum class CellKind { Triangle, Quadrilateral };

struct Cell {
  CellKind kind = CellKind::Triangle;
  std::array<int, 4> v{-1, -1, -1, -1};  // vertex ids, counterclockwise
  int nv = 3;
  double diameter = 0.0;
  double area = 0.0;
};

// Interior facets carry a unit normal oriented from the lower to the higher
// adjacent cell id; boundary facets (right == -1) point out of the domain.
struct Facet {
  std::array<int, 2> v{-1, -1};
  int left = -1;
  int right = -1;
  double length = 0.0;
  Vec2 normal;
};

struct Mesh {
  MeshFamily family = MeshFamily::TriUniform;
  int n = 0;
  std::vector<Vec2> vertices;
  std::vector<Cell> cells;
  std::vector<Facet> facets;
  std::vector<std::vector<int>> vertex_cells;  // vertex id -> sorted cell ids

  // uniform grid bins used to accelerate point location
  int bins_per_side = 0;
  std::vector<std::vector<int>> bins;

  bool triangular() const { return family != MeshFamily::Quad; }
  int interior_facet_count() const;
  double h() const { return 1.0 / (n - 1); }
};

// Builds one of the four families; n >= 2 required.  Throws
// std::invalid_argument when the requested family/size is malformed.
Mesh build_structured_mesh(MeshFamily family, int n);

// Average diameter of the cells sharing each vertex.
std::vector<double> mesh_function(const Mesh& mesh);

// Ids of the cells whose closure contains p (sorted ascending).
std::vector<int> vertex_patch(const Mesh& mesh, Vec2 p);

struct PointLocation {
  int cell = -1;
  Vec2 ref;
};

// Smallest cell id containing p; throws std::domain_error outside the domain.
PointLocation locate_point(const Mesh& mesh, Vec2 p);

Vec2 map_to_physical(const Mesh& mesh, int cell, Vec2 ref);
Vec2 map_to_reference(const Mesh& mesh, int cell, Vec2 x);
bool cell_contains(const Mesh& mesh, int cell, Vec2 p, double tol = 1e-12);

// Value of the piecewise (bi)linear interpolant of per-vertex data at a
// reference point of the given cell.
double interpolate_vertex_data(const Mesh& mesh, const std::vector<double>& vertex_values,
                               int cell, Vec2 ref);

struct AngleStats {
  double min_deg = 0.0;
  double max_deg = 0.0;
};

AngleStats angle_stats(const Mesh& mesh);

// Number of interior triangle pairs violating the empty-circumcircle
// criterion (always 0 for quadrilateral meshes).
int delaunay_violations(const Mesh& mesh);

}  // namespace bpfem
