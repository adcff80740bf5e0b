#include "bpfem/fe_space.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bpfem {

ElementSpec element_from_string(std::string_view name) {
  if (name.size() == 2 && (name[0] == 'p' || name[0] == 'q')) {
    int deg = name[1] - '0';
    if (name[0] == 'p' && deg >= 1 && deg <= 3) return {ElementFamily::Simplex, deg};
    if (name[0] == 'q' && deg >= 1 && deg <= 2) return {ElementFamily::Tensor, deg};
  }
  throw std::invalid_argument("unknown element: " + std::string(name));
}

std::string to_string(ElementSpec spec) {
  return (spec.family == ElementFamily::Simplex ? "p" : "q") + std::to_string(spec.degree);
}

namespace {

// One barycentric factor of the principal-lattice Lagrange basis:
// F_m(s) = prod_{r=0}^{m-1} (k*s - r)/(m - r).
double lattice_factor(int k, int m, double s) {
  double f = 1.0;
  for (int r = 0; r < m; ++r) f *= (k * s - r) / (m - r);
  return f;
}

double lattice_factor_deriv(int k, int m, double s) {
  double sum = 0.0;
  for (int skip = 0; skip < m; ++skip) {
    double term = static_cast<double>(k) / (m - skip);
    for (int r = 0; r < m; ++r)
      if (r != skip) term *= (k * s - r) / (m - r);
    sum += term;
  }
  return sum;
}

// 1D Lagrange basis on the equispaced nodes {0, 1/k, ..., 1}.
double lagrange_1d(int k, int i, double x) {
  double f = 1.0;
  for (int j = 0; j <= k; ++j)
    if (j != i) f *= (k * x - j) / (i - j);
  return f;
}

double lagrange_1d_deriv(int k, int i, double x) {
  double sum = 0.0;
  for (int skip = 0; skip <= k; ++skip) {
    if (skip == i) continue;
    double term = static_cast<double>(k) / (i - skip);
    for (int j = 0; j <= k; ++j)
      if (j != i && j != skip) term *= (k * x - j) / (i - j);
    sum += term;
  }
  return sum;
}

struct SimplexIndex {
  int a0, a1, a2;  // barycentric multi-index, a0+a1+a2 = degree
};

struct TensorIndex {
  int i, j;
};

const std::vector<SimplexIndex>& simplex_multi(int k);
const std::vector<TensorIndex>& tensor_multi(int k);

ReferenceElement make_simplex_element(int k) {
  ReferenceElement re;
  re.spec = {ElementFamily::Simplex, k};
  for (const SimplexIndex& mi : simplex_multi(k)) {
    LocalNode n;
    n.ref = {static_cast<double>(mi.a1) / k, static_cast<double>(mi.a2) / k};
    re.nodes.push_back(n);
  }
  // classify: the multi-index list is ordered corners, edges, interior
  re.nodes[0].kind = LocalNode::Kind::Vertex;
  re.nodes[0].a = 0;
  re.nodes[1].kind = LocalNode::Kind::Vertex;
  re.nodes[1].a = 1;
  re.nodes[2].kind = LocalNode::Kind::Vertex;
  re.nodes[2].a = 2;
  const int edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  int l = 3;
  for (auto [ea, eb] : edges) {
    for (int m = 1; m < k; ++m, ++l) {
      re.nodes[l].kind = LocalNode::Kind::Edge;
      re.nodes[l].a = ea;
      re.nodes[l].b = eb;
      re.nodes[l].m = m;
    }
  }
  int idx = 0;
  for (; l < static_cast<int>(re.nodes.size()); ++l) {
    re.nodes[l].kind = LocalNode::Kind::Interior;
    re.nodes[l].a = idx++;
  }
  re.ndofs = static_cast<int>(re.nodes.size());
  return re;
}

ReferenceElement make_tensor_element(int k) {
  ReferenceElement re;
  re.spec = {ElementFamily::Tensor, k};
  auto push = [&](LocalNode n, int i, int j) {
    n.ref = {static_cast<double>(i) / k, static_cast<double>(j) / k};
    re.nodes.push_back(n);
  };
  push({LocalNode::Kind::Vertex, 0, 0, 0, {}}, 0, 0);
  push({LocalNode::Kind::Vertex, 1, 0, 0, {}}, k, 0);
  push({LocalNode::Kind::Vertex, 2, 0, 0, {}}, k, k);
  push({LocalNode::Kind::Vertex, 3, 0, 0, {}}, 0, k);
  // lattice positions along each edge, walking corner a -> corner b
  for (int m = 1; m < k; ++m) push({LocalNode::Kind::Edge, 0, 1, m, {}}, m, 0);
  for (int m = 1; m < k; ++m) push({LocalNode::Kind::Edge, 1, 2, m, {}}, k, m);
  for (int m = 1; m < k; ++m) push({LocalNode::Kind::Edge, 2, 3, m, {}}, k - m, k);
  for (int m = 1; m < k; ++m) push({LocalNode::Kind::Edge, 3, 0, m, {}}, 0, k - m);
  int idx = 0;
  for (int j = 1; j < k; ++j)
    for (int i = 1; i < k; ++i) push({LocalNode::Kind::Interior, idx++, 0, 0, {}}, i, j);
  re.ndofs = static_cast<int>(re.nodes.size());
  return re;
}

const std::vector<SimplexIndex>& simplex_multi(int k) {
  static std::map<int, std::vector<SimplexIndex>> cache;
  auto it = cache.find(k);
  if (it == cache.end()) {
    std::vector<SimplexIndex> multi;
    multi.push_back({k, 0, 0});
    multi.push_back({0, k, 0});
    multi.push_back({0, 0, k});
    const int edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (auto [ea, eb] : edges) {
      for (int m = 1; m < k; ++m) {
        SimplexIndex mi{0, 0, 0};
        int* bary[3] = {&mi.a0, &mi.a1, &mi.a2};
        *bary[ea] = k - m;
        *bary[eb] = m;
        multi.push_back(mi);
      }
    }
    for (int a1 = 1; a1 < k; ++a1)
      for (int a2 = 1; a1 + a2 < k; ++a2) multi.push_back({k - a1 - a2, a1, a2});
    it = cache.emplace(k, std::move(multi)).first;
  }
  return it->second;
}

const std::vector<TensorIndex>& tensor_multi(int k) {
  static std::map<int, std::vector<TensorIndex>> cache;
  auto it = cache.find(k);
  if (it == cache.end()) {
    std::vector<TensorIndex> multi;
    multi.push_back({0, 0});
    multi.push_back({k, 0});
    multi.push_back({k, k});
    multi.push_back({0, k});
    for (int m = 1; m < k; ++m) multi.push_back({m, 0});
    for (int m = 1; m < k; ++m) multi.push_back({k, m});
    for (int m = 1; m < k; ++m) multi.push_back({k - m, k});
    for (int m = 1; m < k; ++m) multi.push_back({0, k - m});
    for (int j = 1; j < k; ++j)
      for (int i = 1; i < k; ++i) multi.push_back({i, j});
    it = cache.emplace(k, std::move(multi)).first;
  }
  return it->second;
}

}  // namespace

std::vector<double> ReferenceElement::eval(Vec2 p) const {
  std::vector<double> values(ndofs);
  int k = spec.degree;
  if (spec.family == ElementFamily::Simplex) {
    const auto& multi = simplex_multi(k);
    double l0 = 1.0 - p.x - p.y, l1 = p.x, l2 = p.y;
    for (int i = 0; i < ndofs; ++i)
      values[i] = lattice_factor(k, multi[i].a0, l0) * lattice_factor(k, multi[i].a1, l1) *
                  lattice_factor(k, multi[i].a2, l2);
  } else {
    const auto& multi = tensor_multi(k);
    for (int i = 0; i < ndofs; ++i)
      values[i] = lagrange_1d(k, multi[i].i, p.x) * lagrange_1d(k, multi[i].j, p.y);
  }
  return values;
}

std::vector<Vec2> ReferenceElement::eval_grad(Vec2 p) const {
  std::vector<Vec2> grads(ndofs);
  int k = spec.degree;
  if (spec.family == ElementFamily::Simplex) {
    const auto& multi = simplex_multi(k);
    double l0 = 1.0 - p.x - p.y, l1 = p.x, l2 = p.y;
    for (int i = 0; i < ndofs; ++i) {
      double f0 = lattice_factor(k, multi[i].a0, l0);
      double f1 = lattice_factor(k, multi[i].a1, l1);
      double f2 = lattice_factor(k, multi[i].a2, l2);
      double d0 = lattice_factor_deriv(k, multi[i].a0, l0);
      double d1 = lattice_factor_deriv(k, multi[i].a1, l1);
      double d2 = lattice_factor_deriv(k, multi[i].a2, l2);
      // grad lambda = {(-1,-1), (1,0), (0,1)}
      grads[i] = {-d0 * f1 * f2 + f0 * d1 * f2, -d0 * f1 * f2 + f0 * f1 * d2};
    }
  } else {
    const auto& multi = tensor_multi(k);
    for (int i = 0; i < ndofs; ++i) {
      grads[i] = {lagrange_1d_deriv(k, multi[i].i, p.x) * lagrange_1d(k, multi[i].j, p.y),
                  lagrange_1d(k, multi[i].i, p.x) * lagrange_1d_deriv(k, multi[i].j, p.y)};
    }
  }
  return grads;
}

const ReferenceElement& reference_element(ElementSpec spec) {
  static std::map<std::pair<int, int>, ReferenceElement> cache;
  std::pair<int, int> key{spec.family == ElementFamily::Simplex ? 0 : 1, spec.degree};
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (spec.family == ElementFamily::Simplex && (spec.degree < 1 || spec.degree > 3))
      throw std::invalid_argument("simplex elements support degrees 1..3");
    if (spec.family == ElementFamily::Tensor && (spec.degree < 1 || spec.degree > 2))
      throw std::invalid_argument("tensor elements support degrees 1..2");
    ReferenceElement re = spec.family == ElementFamily::Simplex
                              ? make_simplex_element(spec.degree)
                              : make_tensor_element(spec.degree);
    it = cache.emplace(key, std::move(re)).first;
  }
  return it->second;
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  const Cell& c = mesh.cells[cell];
  CellGeometry g;
  g.v0 = mesh.vertices[c.v[0]];
  g.e1 = mesh.vertices[c.v[1]] - g.v0;
  g.e2 = (c.kind == CellKind::Triangle ? mesh.vertices[c.v[2]] : mesh.vertices[c.v[3]]) - g.v0;
  g.det = cross(g.e1, g.e2);
  return g;
}

Vec2 physical_gradient(const CellGeometry& g, Vec2 rg) {
  return {(g.e2.y * rg.x - g.e1.y * rg.y) / g.det, (-g.e2.x * rg.x + g.e1.x * rg.y) / g.det};
}

int DofMap::interior_count() const {
  int count = 0;
  for (uint8_t b : on_boundary)
    if (!b) ++count;
  return count;
}

DofMap build_dof_map(const Mesh& mesh, ElementSpec spec) {
  if (spec.family == ElementFamily::Simplex && !mesh.triangular())
    throw std::invalid_argument("simplex elements need a triangular mesh");
  if (spec.family == ElementFamily::Tensor && mesh.triangular())
    throw std::invalid_argument("tensor elements need a quadrilateral mesh");

  const ReferenceElement& re = reference_element(spec);
  const int k = spec.degree;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nf = static_cast<int>(mesh.facets.size());
  const int nc = static_cast<int>(mesh.cells.size());
  const int per_edge = k - 1;
  const int per_cell = spec.family == ElementFamily::Simplex ? (k - 1) * (k - 2) / 2
                                                             : (k - 1) * (k - 1);

  std::map<std::pair<int, int>, int> facet_of_edge;
  for (int f = 0; f < nf; ++f) facet_of_edge[{mesh.facets[f].v[0], mesh.facets[f].v[1]}] = f;

  const int total = nv + nf * per_edge + nc * per_cell;
  std::vector<Vec2> pos(total);
  std::vector<std::vector<int>> patches(total);
  std::vector<double> hval(total);
  const std::vector<double> hvert = mesh_function(mesh);

  for (int v = 0; v < nv; ++v) {
    pos[v] = mesh.vertices[v];
    patches[v] = mesh.vertex_cells[v];
    hval[v] = hvert[v];
  }
  auto edge_id = [&](int f, int m) { return nv + f * per_edge + (m - 1); };
  for (int f = 0; f < nf; ++f) {
    const Facet& fc = mesh.facets[f];
    Vec2 a = mesh.vertices[fc.v[0]], b = mesh.vertices[fc.v[1]];
    std::vector<int> patch{fc.left};
    if (fc.right >= 0) patch.push_back(fc.right);
    std::sort(patch.begin(), patch.end());
    for (int m = 1; m < k; ++m) {
      double t = static_cast<double>(m) / k;
      int id = edge_id(f, m);
      pos[id] = a + t * (b - a);
      patches[id] = patch;
      hval[id] = (1.0 - t) * hvert[fc.v[0]] + t * hvert[fc.v[1]];
    }
  }
  auto interior_id = [&](int c, int idx) { return nv + nf * per_edge + c * per_cell + idx; };
  for (int c = 0; c < nc; ++c) {
    for (const LocalNode& ln : re.nodes) {
      if (ln.kind != LocalNode::Kind::Interior) continue;
      int id = interior_id(c, ln.a);
      pos[id] = map_to_physical(mesh, c, ln.ref);
      patches[id] = {c};
      hval[id] = interpolate_vertex_data(mesh, hvert, c, ln.ref);
    }
  }

  // stable global numbering: lexicographic in snapped coordinates
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  auto snap = [](double c) { return std::llround(c * 1e12); };
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    auto kl = std::pair{snap(pos[lhs].x), snap(pos[lhs].y)};
    auto kr = std::pair{snap(pos[rhs].x), snap(pos[rhs].y)};
    return kl < kr;
  });
  std::vector<int> rank(total);
  for (int i = 0; i < total; ++i) rank[order[i]] = i;

  DofMap dofs;
  dofs.spec = spec;
  dofs.mesh = &mesh;
  dofs.nodes.resize(total);
  dofs.on_boundary.resize(total);
  dofs.node_cells.resize(total);
  dofs.h_node.resize(total);
  const double tol = 1e-12;
  for (int i = 0; i < total; ++i) {
    int r = rank[i];
    dofs.nodes[r] = pos[i];
    dofs.node_cells[r] = std::move(patches[i]);
    dofs.h_node[r] = hval[i];
    Vec2 p = pos[i];
    dofs.on_boundary[r] =
        p.x < tol || p.x > 1.0 - tol || p.y < tol || p.y > 1.0 - tol ? 1 : 0;
  }

  dofs.vertex_dof.resize(nv);
  for (int v = 0; v < nv; ++v) dofs.vertex_dof[v] = rank[v];

  dofs.cell_dofs.assign(nc, std::vector<int>(re.ndofs, -1));
  for (int c = 0; c < nc; ++c) {
    const Cell& cell = mesh.cells[c];
    for (int l = 0; l < re.ndofs; ++l) {
      const LocalNode& ln = re.nodes[l];
      int id = -1;
      if (ln.kind == LocalNode::Kind::Vertex) {
        id = cell.v[ln.a];
      } else if (ln.kind == LocalNode::Kind::Edge) {
        int ga = cell.v[ln.a], gb = cell.v[ln.b];
        int f = facet_of_edge.at({std::min(ga, gb), std::max(ga, gb)});
        int mc = ga < gb ? ln.m : k - ln.m;
        id = edge_id(f, mc);
      } else {
        id = interior_id(c, ln.a);
      }
      dofs.cell_dofs[c][l] = rank[id];
    }
  }
  return dofs;
}

Vector interpolate(const DofMap& dofs, const ScalarField& f) {
  Vector coeffs(dofs.size());
  for (int i = 0; i < dofs.size(); ++i) {
    double v = f(dofs.nodes[i]);
    if (!std::isfinite(v))
      throw std::domain_error("interpolate: non-finite sample at node " + std::to_string(i));
    coeffs[i] = v;
  }
  return coeffs;
}

Vector l2_project(const DofMap& dofs, const ScalarField& f) {
  const Mesh& mesh = *dofs.mesh;
  const ReferenceElement& re = reference_element(dofs.spec);
  const int n = dofs.size();
  std::vector<Eigen::Triplet<double>> trips;
  Vector rhs = Vector::Zero(n);
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    QuadratureRule rule = cell_quadrature(mesh.cells[c].kind, 2 * dofs.spec.degree + 2);
    CellGeometry geom = cell_geometry(mesh, c);
    const auto& gd = dofs.cell_dofs[c];
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(re.ndofs, re.ndofs);
    Eigen::VectorXd lrhs = Eigen::VectorXd::Zero(re.ndofs);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      std::vector<double> phi = re.eval(rule.points[q]);
      double w = rule.weights[q] * std::abs(geom.det);
      double fx = f(map_to_physical(mesh, c, rule.points[q]));
      for (int i = 0; i < re.ndofs; ++i) {
        lrhs[i] += w * fx * phi[i];
        for (int j = 0; j < re.ndofs; ++j) local(i, j) += w * phi[i] * phi[j];
      }
    }
    for (int i = 0; i < re.ndofs; ++i) {
      rhs[gd[i]] += lrhs[i];
      for (int j = 0; j < re.ndofs; ++j) trips.emplace_back(gd[i], gd[j], local(i, j));
    }
  }
  Eigen::SparseMatrix<double> mass(n, n);
  mass.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(mass);
  if (chol.info() != Eigen::Success) throw std::runtime_error("l2_project: mass factorization failed");
  return chol.solve(rhs);
}

double evaluate_in_cell(const DofMap& dofs, const Vector& coeffs, int cell, Vec2 ref) {
  const ReferenceElement& re = reference_element(dofs.spec);
  std::vector<double> phi = re.eval(ref);
  const auto& gd = dofs.cell_dofs[cell];
  double v = 0.0;
  for (int i = 0; i < re.ndofs; ++i) v += coeffs[gd[i]] * phi[i];
  return v;
}

Vec2 gradient_in_cell(const DofMap& dofs, const Vector& coeffs, int cell, Vec2 ref) {
  const ReferenceElement& re = reference_element(dofs.spec);
  CellGeometry geom = cell_geometry(*dofs.mesh, cell);
  std::vector<Vec2> gphi = re.eval_grad(ref);
  const auto& gd = dofs.cell_dofs[cell];
  Vec2 g;
  for (int i = 0; i < re.ndofs; ++i) g = g + coeffs[gd[i]] * physical_gradient(geom, gphi[i]);
  return g;
}

double evaluate(const DofMap& dofs, const Vector& coeffs, Vec2 p) {
  PointLocation loc = locate_point(*dofs.mesh, p);
  return evaluate_in_cell(dofs, coeffs, loc.cell, loc.ref);
}

QuadratureRule cell_quadrature(CellKind kind, int required_degree) {
  return kind == CellKind::Triangle ? triangle_quadrature(required_degree)
                                    : square_quadrature(required_degree);
}

}  // namespace bpfem
