#include "bpfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bpfem {

namespace {

int default_degree(const DofMap& dofs, int quad_degree) {
  return quad_degree >= 0 ? quad_degree : 2 * dofs.spec.degree + 2;
}

// the facet penalty weights measure the velocity in the componentwise max norm
double beta_sup(Vec2 b) { return std::max(std::abs(b.x), std::abs(b.y)); }

}  // namespace

GalerkinSystem assemble_galerkin(const ProblemSpec& prob, const DofMap& dofs, int quad_degree) {
  const Mesh& mesh = *dofs.mesh;
  const ReferenceElement& re = reference_element(dofs.spec);
  const int n = dofs.size();
  const int deg = default_degree(dofs, quad_degree);

  std::vector<Triplet> trips;
  trips.reserve(mesh.cells.size() * re.ndofs * re.ndofs);
  Vector load = Vector::Zero(n);

  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    QuadratureRule rule = cell_quadrature(mesh.cells[c].kind, deg);
    CellGeometry geom = cell_geometry(mesh, c);
    const double jac = std::abs(geom.det);
    const auto& gd = dofs.cell_dofs[c];

    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(re.ndofs, re.ndofs);
    Eigen::VectorXd fe = Eigen::VectorXd::Zero(re.ndofs);
    std::vector<Vec2> pg(re.ndofs);

    for (size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 x = map_to_physical(mesh, c, rule.points[q]);
      std::vector<double> phi = re.eval(rule.points[q]);
      std::vector<Vec2> gphi = re.eval_grad(rule.points[q]);
      for (int i = 0; i < re.ndofs; ++i) pg[i] = physical_gradient(geom, gphi[i]);

      const double w = rule.weights[q] * jac;
      const Matrix2 d = prob.diffusion(x);
      const Vec2 beta = prob.velocity(x);
      const double fx = prob.source ? prob.source(x) : 0.0;

      for (int j = 0; j < re.ndofs; ++j) {
        Vec2 dg{d(0, 0) * pg[j].x + d(0, 1) * pg[j].y, d(1, 0) * pg[j].x + d(1, 1) * pg[j].y};
        double conv = dot(beta, pg[j]);
        for (int i = 0; i < re.ndofs; ++i)
          ke(i, j) += w * (dot(dg, pg[i]) + conv * phi[i] + prob.reaction * phi[j] * phi[i]);
      }
      for (int i = 0; i < re.ndofs; ++i) fe[i] += w * fx * phi[i];
    }

    for (int i = 0; i < re.ndofs; ++i) {
      load[gd[i]] += fe[i];
      for (int j = 0; j < re.ndofs; ++j) trips.emplace_back(gd[i], gd[j], ke(i, j));
    }
  }

  GalerkinSystem sys;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.matrix.makeCompressed();
  sys.load = std::move(load);
  return sys;
}

SparseMat assemble_mass(const DofMap& dofs) {
  const Mesh& mesh = *dofs.mesh;
  const ReferenceElement& re = reference_element(dofs.spec);
  const int n = dofs.size();
  std::vector<Triplet> trips;
  trips.reserve(mesh.cells.size() * re.ndofs * re.ndofs);

  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    QuadratureRule rule = cell_quadrature(mesh.cells[c].kind, 2 * dofs.spec.degree + 2);
    CellGeometry geom = cell_geometry(mesh, c);
    const double jac = std::abs(geom.det);
    const auto& gd = dofs.cell_dofs[c];
    for (size_t q = 0; q < rule.points.size(); ++q) {
      std::vector<double> phi = re.eval(rule.points[q]);
      const double w = rule.weights[q] * jac;
      for (int i = 0; i < re.ndofs; ++i)
        for (int j = 0; j < re.ndofs; ++j) trips.emplace_back(gd[i], gd[j], w * phi[i] * phi[j]);
    }
  }
  SparseMat m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

SparseMat assemble_cip(const DofMap& dofs, const VectorField& beta, const StabConfig& stab) {
  const Mesh& mesh = *dofs.mesh;
  const ReferenceElement& re = reference_element(dofs.spec);
  const int n = dofs.size();
  SparseMat j(n, n);
  if (stab.variant == CipVariant::None) return j;

  const int k = dofs.spec.degree;
  auto [qt, qw] = gauss_legendre_01(k + 2);
  std::vector<Triplet> trips;

  for (const Facet& f : mesh.facets) {
    if (f.right < 0) continue;
    Vec2 a = mesh.vertices[f.v[0]], b = mesh.vertices[f.v[1]];
    // penalty weight: the larger adjacent cell diameter (not the facet length)
    const double hf = std::max(mesh.cells[f.left].diameter, mesh.cells[f.right].diameter);
    const double arc = f.length;  // jacobian of the facet integral

    const auto& dl = dofs.cell_dofs[f.left];
    const auto& dr = dofs.cell_dofs[f.right];
    std::vector<int> global(dl);
    for (int g : dr)
      if (std::find(global.begin(), global.end(), g) == global.end()) global.push_back(g);
    const int nu = static_cast<int>(global.size());

    CellGeometry gl = cell_geometry(mesh, f.left);
    CellGeometry gr = cell_geometry(mesh, f.right);

    // facet quadrature points, physical
    const int nq = static_cast<int>(qt.size());
    std::vector<Vec2> xq(nq);
    std::vector<Vec2> betaq(nq);
    double beta_max = 0.0;
    for (int q = 0; q < nq; ++q) {
      xq[q] = a + qt[q] * (b - a);
      betaq[q] = beta(xq[q]);
      beta_max = std::max(beta_max, beta_sup(betaq[q]));
    }

    double coef;
    if (stab.variant == CipVariant::Normal) {
      coef = stab.gamma * beta_max * hf * hf;
    } else {
      if (beta_max <= 0.0) continue;
      coef = stab.gamma_beta * hf * hf / beta_max;
    }
    if (coef == 0.0) continue;

    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nu, nu);
    std::vector<Vec2> jump(nu);
    for (int q = 0; q < nq; ++q) {
      std::fill(jump.begin(), jump.end(), Vec2{});
      std::vector<Vec2> gradl = re.eval_grad(map_to_reference(mesh, f.left, xq[q]));
      std::vector<Vec2> gradr = re.eval_grad(map_to_reference(mesh, f.right, xq[q]));
      for (int i = 0; i < re.ndofs; ++i) {
        Vec2 g = physical_gradient(gl, gradl[i]);
        int u = static_cast<int>(std::find(global.begin(), global.end(), dl[i]) - global.begin());
        jump[u] = jump[u] + g;
      }
      for (int i = 0; i < re.ndofs; ++i) {
        Vec2 g = physical_gradient(gr, gradr[i]);
        int u = static_cast<int>(std::find(global.begin(), global.end(), dr[i]) - global.begin());
        jump[u] = jump[u] - g;
      }
      const double w = qw[q] * arc * coef;
      if (stab.variant == CipVariant::Normal) {
        for (int r = 0; r < nu; ++r)
          for (int s = 0; s < nu; ++s) local(r, s) += w * dot(jump[r], jump[s]);
      } else {
        for (int r = 0; r < nu; ++r) {
          double br = dot(betaq[q], jump[r]);
          for (int s = 0; s < nu; ++s) local(r, s) += w * br * dot(betaq[q], jump[s]);
        }
      }
    }
    for (int r = 0; r < nu; ++r)
      for (int s = 0; s < nu; ++s)
        if (local(r, s) != 0.0) trips.emplace_back(global[r], global[s], local(r, s));
  }

  j.setFromTriplets(trips.begin(), trips.end());
  j.makeCompressed();
  return j;
}

double cip_seminorm(const DofMap& dofs, const VectorField& beta, const StabConfig& stab,
                    const Vector& v) {
  if (v.size() != dofs.size()) throw std::invalid_argument("cip_seminorm: size mismatch");
  if (stab.variant == CipVariant::None) return 0.0;
  const Mesh& mesh = *dofs.mesh;
  auto [qt, qw] = gauss_legendre_01(dofs.spec.degree + 2);
  const int nq = static_cast<int>(qt.size());

  double acc = 0.0;
  for (const Facet& f : mesh.facets) {
    if (f.right < 0) continue;
    Vec2 a = mesh.vertices[f.v[0]], b = mesh.vertices[f.v[1]];
    const double hf = std::max(mesh.cells[f.left].diameter, mesh.cells[f.right].diameter);

    double facet = 0.0;
    double beta_max = 0.0;
    for (int q = 0; q < nq; ++q) {
      Vec2 x = a + qt[q] * (b - a);
      Vec2 bq = beta(x);
      beta_max = std::max(beta_max, beta_sup(bq));
      Vec2 jump = gradient_in_cell(dofs, v, f.left, map_to_reference(mesh, f.left, x)) -
                  gradient_in_cell(dofs, v, f.right, map_to_reference(mesh, f.right, x));
      double sq = stab.variant == CipVariant::Normal ? dot(jump, jump)
                                                     : dot(bq, jump) * dot(bq, jump);
      facet += qw[q] * f.length * sq;
    }
    if (stab.variant == CipVariant::Normal) {
      acc += stab.gamma * beta_max * hf * hf * facet;
    } else if (beta_max > 0.0) {
      acc += stab.gamma_beta * hf * hf / beta_max * facet;
    }
  }
  return acc;
}

Vector assemble_s_diag(const DofMap& dofs, const ProblemSpec& prob, double alpha) {
  const Mesh& mesh = *dofs.mesh;
  const int deg = 2 * dofs.spec.degree + 2;
  const int n = dofs.size();
  Vector sigma(n);

  // patch maxima per cell, shared by all nodes touching the cell
  const int nc = static_cast<int>(mesh.cells.size());
  std::vector<double> cell_dmax(nc, 0.0), cell_bmax(nc, 0.0);
  for (int c = 0; c < nc; ++c) {
    QuadratureRule rule = cell_quadrature(mesh.cells[c].kind, deg);
    double dmax = 0.0, bmax = 0.0;
    for (const Vec2& p : rule.points) {
      Vec2 x = map_to_physical(mesh, c, p);
      Matrix2 d = prob.diffusion(x);
      dmax = std::max(dmax, d.cwiseAbs().maxCoeff());
      bmax = std::max(bmax, norm(prob.velocity(x)));
    }
    cell_dmax[c] = dmax;
    cell_bmax[c] = bmax;
  }

  for (int i = 0; i < n; ++i) {
    double dmax = 0.0, bmax = 0.0;
    for (int c : dofs.node_cells[i]) {
      dmax = std::max(dmax, cell_dmax[c]);
      bmax = std::max(bmax, cell_bmax[c]);
    }
    const double h = dofs.h_node[i];
    sigma[i] = alpha * (dmax + bmax * h + prob.reaction * h * h);
  }
  return sigma;
}

double lumped_product(const DofMap& dofs, const Vector& u, const Vector& v,
                      const std::vector<uint8_t>& include) {
  double sum = 0.0;
  for (int i = 0; i < dofs.size(); ++i)
    if (include[i]) sum += dofs.h_node[i] * dofs.h_node[i] * u[i] * v[i];
  return sum;
}

std::vector<uint8_t> interior_mask(const DofMap& dofs) {
  std::vector<uint8_t> mask(dofs.size());
  for (int i = 0; i < dofs.size(); ++i) mask[i] = dofs.on_boundary[i] ? 0 : 1;
  return mask;
}

std::vector<uint8_t> unknown_mask(const DofMap& dofs, const ProblemSpec& prob) {
  std::vector<uint8_t> mask(dofs.size());
  for (int i = 0; i < dofs.size(); ++i) {
    bool fixed = dofs.on_boundary[i] &&
                 (!prob.dirichlet_region || prob.dirichlet_region(dofs.nodes[i]));
    mask[i] = fixed ? 0 : 1;
  }
  return mask;
}

Vector dirichlet_extension(const DofMap& dofs, const ProblemSpec& prob) {
  Vector ug = Vector::Zero(dofs.size());
  if (!prob.boundary_value) return ug;
  for (int i = 0; i < dofs.size(); ++i) {
    bool fixed = dofs.on_boundary[i] &&
                 (!prob.dirichlet_region || prob.dirichlet_region(dofs.nodes[i]));
    if (fixed) ug[i] = prob.boundary_value(dofs.nodes[i]);
  }
  return ug;
}

ReducedSystem reduce_system(const SparseMat& A, const Vector& F, const Vector& ug,
                            const std::vector<uint8_t>& unknown) {
  const int n = static_cast<int>(A.rows());
  if (F.size() != n || ug.size() != n || static_cast<int>(unknown.size()) != n)
    throw std::invalid_argument("reduce_system: size mismatch");

  ReducedSystem red;
  red.from_global.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (unknown[i]) {
      red.from_global[i] = static_cast<int>(red.to_global.size());
      red.to_global.push_back(i);
    }
  }
  red.matrix = restrict_matrix(A, red.to_global, red.from_global);

  Vector shifted = F - A * ug;
  red.rhs.resize(red.to_global.size());
  for (size_t r = 0; r < red.to_global.size(); ++r) red.rhs[r] = shifted[red.to_global[r]];
  return red;
}

SparseMat restrict_matrix(const SparseMat& A, const std::vector<int>& to_global,
                          const std::vector<int>& from_global) {
  std::vector<Triplet> trips;
  for (size_t r = 0; r < to_global.size(); ++r) {
    for (SparseMat::InnerIterator it(A, to_global[r]); it; ++it) {
      int cc = from_global[it.col()];
      if (cc >= 0) trips.emplace_back(static_cast<int>(r), cc, it.value());
    }
  }
  SparseMat out(to_global.size(), to_global.size());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

Vector scatter(const Vector& reduced, const std::vector<int>& to_global, const Vector& base) {
  Vector out = base;
  for (size_t r = 0; r < to_global.size(); ++r) out[to_global[r]] = reduced[r] + base[to_global[r]];
  return out;
}

}  // namespace bpfem
