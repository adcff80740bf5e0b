#include "bpfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bpfem {

MeshFamily mesh_family_from_string(std::string_view name) {
  if (name == "tri-alt") return MeshFamily::TriAlt;
  if (name == "tri-uniform") return MeshFamily::TriUniform;
  if (name == "tri-perturbed") return MeshFamily::TriPerturbed;
  if (name == "quad") return MeshFamily::Quad;
  throw std::invalid_argument("unknown mesh family: " + std::string(name));
}

std::string_view to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::TriAlt: return "tri-alt";
    case MeshFamily::TriUniform: return "tri-uniform";
    case MeshFamily::TriPerturbed: return "tri-perturbed";
    case MeshFamily::Quad: return "quad";
  }
  return "?";
}

int Mesh::interior_facet_count() const {
  int count = 0;
  for (const Facet& f : facets)
    if (f.right >= 0) ++count;
  return count;
}

namespace {

double polygon_area(const Mesh& mesh, const Cell& cell) {
  double a = 0.0;
  for (int k = 0; k < cell.nv; ++k) {
    Vec2 p = mesh.vertices[cell.v[k]];
    Vec2 q = mesh.vertices[cell.v[(k + 1) % cell.nv]];
    a += cross(p, q);
  }
  return 0.5 * a;
}

double cell_diameter(const Mesh& mesh, const Cell& cell) {
  double d = 0.0;
  for (int a = 0; a < cell.nv; ++a)
    for (int b = a + 1; b < cell.nv; ++b)
      d = std::max(d, norm(mesh.vertices[cell.v[a]] - mesh.vertices[cell.v[b]]));
  return d;
}

Vec2 centroid(const Mesh& mesh, int cell) {
  const Cell& c = mesh.cells[cell];
  Vec2 s;
  for (int k = 0; k < c.nv; ++k) s = s + mesh.vertices[c.v[k]];
  return (1.0 / c.nv) * s;
}

void build_facets(Mesh& mesh) {
  std::map<std::pair<int, int>, int> edge_to_facet;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const Cell& cell = mesh.cells[c];
    for (int k = 0; k < cell.nv; ++k) {
      int a = cell.v[k];
      int b = cell.v[(k + 1) % cell.nv];
      std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = edge_to_facet.find(key);
      if (it == edge_to_facet.end()) {
        Facet f;
        f.v = {key.first, key.second};
        f.left = c;
        edge_to_facet.emplace(key, static_cast<int>(mesh.facets.size()));
        mesh.facets.push_back(f);
      } else {
        Facet& f = mesh.facets[it->second];
        if (f.right >= 0) throw std::runtime_error("non-conforming mesh: edge shared by >2 cells");
        f.right = c;  // cells are visited in ascending id order, so left < right
      }
    }
  }
  for (Facet& f : mesh.facets) {
    Vec2 a = mesh.vertices[f.v[0]];
    Vec2 b = mesh.vertices[f.v[1]];
    f.length = norm(b - a);
    Vec2 t = (1.0 / f.length) * (b - a);
    Vec2 nrm{t.y, -t.x};
    Vec2 mid = 0.5 * (a + b);
    if (dot(nrm, mid - centroid(mesh, f.left)) < 0.0) nrm = -1.0 * nrm;
    f.normal = nrm;
  }
}

void build_bins(Mesh& mesh) {
  int g = mesh.n - 1;
  mesh.bins_per_side = g;
  mesh.bins.assign(static_cast<size_t>(g) * g, {});
  auto bin_of = [g](double coord) {
    int k = static_cast<int>(std::floor(coord * g));
    return std::clamp(k, 0, g - 1);
  };
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const Cell& cell = mesh.cells[c];
    double x0 = 1.0, x1 = 0.0, y0 = 1.0, y1 = 0.0;
    for (int k = 0; k < cell.nv; ++k) {
      Vec2 p = mesh.vertices[cell.v[k]];
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    for (int j = bin_of(y0); j <= bin_of(y1); ++j)
      for (int i = bin_of(x0); i <= bin_of(x1); ++i)
        mesh.bins[static_cast<size_t>(j) * g + i].push_back(c);
  }
}

}  // namespace

Mesh build_structured_mesh(MeshFamily family, int n) {
  if (n < 2) throw std::invalid_argument("mesh needs at least 2 grid points per side");
  Mesh mesh;
  mesh.family = family;
  mesh.n = n;

  const double denom = n - 1;
  mesh.vertices.reserve(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.vertices.push_back({i / denom, j / denom});

  if (family == MeshFamily::TriPerturbed) {
    const double shift = 0.45 / denom;
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i)
        if ((i + j) % 2 == 1) mesh.vertices[static_cast<size_t>(j) * n + i].x += shift;
  }

  auto vid = [n](int i, int j) { return j * n + i; };
  for (int j = 0; j < n - 1; ++j) {
    for (int i = 0; i < n - 1; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      if (family == MeshFamily::Quad) {
        Cell c;
        c.kind = CellKind::Quadrilateral;
        c.nv = 4;
        c.v = {v00, v10, v11, v01};
        mesh.cells.push_back(c);
      } else if (family == MeshFamily::TriAlt && (i + j) % 2 == 1) {
        Cell c;
        c.v = {v00, v10, v01, -1};
        mesh.cells.push_back(c);
        c.v = {v10, v11, v01, -1};
        mesh.cells.push_back(c);
      } else {
        Cell c;
        c.v = {v00, v10, v11, -1};
        mesh.cells.push_back(c);
        c.v = {v00, v11, v01, -1};
        mesh.cells.push_back(c);
      }
    }
  }

  for (Cell& c : mesh.cells) {
    c.area = polygon_area(mesh, c);
    c.diameter = cell_diameter(mesh, c);
    if (!(c.area > 0.0)) throw std::runtime_error("degenerate cell in structured mesh");
  }

  mesh.vertex_cells.assign(mesh.vertices.size(), {});
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
    for (int k = 0; k < mesh.cells[c].nv; ++k)
      mesh.vertex_cells[mesh.cells[c].v[k]].push_back(c);

  build_facets(mesh);
  build_bins(mesh);
  return mesh;
}

std::vector<double> mesh_function(const Mesh& mesh) {
  std::vector<double> h(mesh.vertices.size(), 0.0);
  for (size_t v = 0; v < mesh.vertices.size(); ++v) {
    const auto& patch = mesh.vertex_cells[v];
    double sum = 0.0;
    for (int c : patch) sum += mesh.cells[c].diameter;
    h[v] = sum / patch.size();
  }
  return h;
}

Vec2 map_to_physical(const Mesh& mesh, int cell, Vec2 ref) {
  const Cell& c = mesh.cells[cell];
  Vec2 v0 = mesh.vertices[c.v[0]];
  Vec2 e1, e2;
  if (c.kind == CellKind::Triangle) {
    e1 = mesh.vertices[c.v[1]] - v0;
    e2 = mesh.vertices[c.v[2]] - v0;
  } else {
    e1 = mesh.vertices[c.v[1]] - v0;
    e2 = mesh.vertices[c.v[3]] - v0;
  }
  return v0 + ref.x * e1 + ref.y * e2;
}

Vec2 map_to_reference(const Mesh& mesh, int cell, Vec2 x) {
  const Cell& c = mesh.cells[cell];
  Vec2 v0 = mesh.vertices[c.v[0]];
  Vec2 e1, e2;
  if (c.kind == CellKind::Triangle) {
    e1 = mesh.vertices[c.v[1]] - v0;
    e2 = mesh.vertices[c.v[2]] - v0;
  } else {
    e1 = mesh.vertices[c.v[1]] - v0;
    e2 = mesh.vertices[c.v[3]] - v0;
  }
  double det = cross(e1, e2);
  Vec2 d = x - v0;
  return {cross(d, e2) / det, cross(e1, d) / det};
}

bool cell_contains(const Mesh& mesh, int cell, Vec2 p, double tol) {
  Vec2 r = map_to_reference(mesh, cell, p);
  double s = tol / mesh.cells[cell].diameter;
  if (mesh.cells[cell].kind == CellKind::Triangle)
    return r.x >= -s && r.y >= -s && r.x + r.y <= 1.0 + s;
  return r.x >= -s && r.y >= -s && r.x <= 1.0 + s && r.y <= 1.0 + s;
}

namespace {

std::vector<int> candidate_cells(const Mesh& mesh, Vec2 p) {
  int g = mesh.bins_per_side;
  int i = std::clamp(static_cast<int>(std::floor(p.x * g)), 0, g - 1);
  int j = std::clamp(static_cast<int>(std::floor(p.y * g)), 0, g - 1);
  return mesh.bins[static_cast<size_t>(j) * g + i];
}

}  // namespace

std::vector<int> vertex_patch(const Mesh& mesh, Vec2 p) {
  std::vector<int> out;
  for (int c : candidate_cells(mesh, p))
    if (cell_contains(mesh, c, p, 1e-10)) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PointLocation locate_point(const Mesh& mesh, Vec2 p) {
  const double tol = 1e-12;
  if (p.x < -tol || p.x > 1.0 + tol || p.y < -tol || p.y > 1.0 + tol)
    throw std::domain_error("point outside the unit square");
  for (int c : candidate_cells(mesh, p))
    if (cell_contains(mesh, c, p, 1e-10)) return {c, map_to_reference(mesh, c, p)};
  throw std::domain_error("point not located in any cell");
}

double interpolate_vertex_data(const Mesh& mesh, const std::vector<double>& vertex_values,
                               int cell, Vec2 ref) {
  const Cell& c = mesh.cells[cell];
  if (c.kind == CellKind::Triangle) {
    return (1.0 - ref.x - ref.y) * vertex_values[c.v[0]] + ref.x * vertex_values[c.v[1]] +
           ref.y * vertex_values[c.v[2]];
  }
  return (1.0 - ref.x) * (1.0 - ref.y) * vertex_values[c.v[0]] +
         ref.x * (1.0 - ref.y) * vertex_values[c.v[1]] + ref.x * ref.y * vertex_values[c.v[2]] +
         (1.0 - ref.x) * ref.y * vertex_values[c.v[3]];
}

AngleStats angle_stats(const Mesh& mesh) {
  AngleStats st{180.0, 0.0};
  for (const Cell& c : mesh.cells) {
    for (int k = 0; k < c.nv; ++k) {
      Vec2 p = mesh.vertices[c.v[k]];
      Vec2 a = mesh.vertices[c.v[(k + 1) % c.nv]] - p;
      Vec2 b = mesh.vertices[c.v[(k + c.nv - 1) % c.nv]] - p;
      double ang = std::atan2(std::abs(cross(a, b)), dot(a, b)) * 180.0 / std::numbers::pi;
      st.min_deg = std::min(st.min_deg, ang);
      st.max_deg = std::max(st.max_deg, ang);
    }
  }
  return st;
}

namespace {

// > 0 when d lies strictly inside the circumcircle of the ccw triangle (a,b,c)
double incircle_det(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double ax = a.x - d.x, ay = a.y - d.y;
  double bx = b.x - d.x, by = b.y - d.y;
  double cx = c.x - d.x, cy = c.y - d.y;
  double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

}  // namespace

int delaunay_violations(const Mesh& mesh) {
  if (!mesh.triangular()) return 0;
  int count = 0;
  for (const Facet& f : mesh.facets) {
    if (f.right < 0) continue;
    const Cell& t1 = mesh.cells[f.left];
    const Cell& t2 = mesh.cells[f.right];
    int opposite = -1;
    for (int k = 0; k < 3; ++k)
      if (t2.v[k] != f.v[0] && t2.v[k] != f.v[1]) opposite = t2.v[k];
    Vec2 a = mesh.vertices[t1.v[0]], b = mesh.vertices[t1.v[1]], c = mesh.vertices[t1.v[2]];
    Vec2 d = mesh.vertices[opposite];
    double scale = std::max(mesh.cells[f.left].diameter, mesh.cells[f.right].diameter);
    if (incircle_det(a, b, c, d) > 1e-10 * scale * scale * scale * scale) ++count;
  }
  return count;
}

}  // namespace bpfem
