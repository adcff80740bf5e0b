#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "bpfem/fe_space.hpp"

namespace bpfem {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;
using Matrix2 = Eigen::Matrix2d;
using TensorField = std::function<Matrix2(Vec2)>;
using VectorField = std::function<Vec2(Vec2)>;

// -div(D grad u) + beta . grad u + mu u = f with Dirichlet data g on the
// inflow part of the boundary (all of it when dirichlet_region is empty) and
// natural conditions elsewhere.  kappa is the upper bound of the admissible
// interval [0, kappa].
struct ProblemSpec {
  TensorField diffusion;
  VectorField velocity;
  double reaction = 0.0;
  ScalarField source;
  ScalarField boundary_value;
  std::function<bool(Vec2)> dirichlet_region;
  double kappa = 1.0;
};

enum class CipVariant { None, Normal, Upwind };

struct StabConfig {
  CipVariant variant = CipVariant::None;
  double gamma = 0.0;       // penalty of the full-gradient-jump variant
  double gamma_beta = 0.0;  // penalty of the streamline-jump variant
};

struct GalerkinSystem {
  SparseMat matrix;  // A(i,j) = a(phi_j, phi_i) over all dofs
  Vector load;
};

// Volume terms with quadrature of degree 2k+2 unless overridden.
GalerkinSystem assemble_galerkin(const ProblemSpec& prob, const DofMap& dofs,
                                 int quad_degree = -1);

SparseMat assemble_mass(const DofMap& dofs);

// Gradient-jump penalty over interior facets.  The normal variant weighs a
// facet by gamma * max|beta| * h_F^2, the upwind variant by
// gamma_beta * h_F^2 / max|beta| with the jumps contracted against beta;
// h_F is the larger diameter of the two adjacent cells and |beta| is the
// componentwise max norm of the velocity.
SparseMat assemble_cip(const DofMap& dofs, const VectorField& beta, const StabConfig& stab);

// J(v, v) accumulated facet by facet as weighted squared jumps.  Equals
// v'.J.v with J = assemble_cip(...) in exact arithmetic, but stays accurate
// (and nonnegative) when the value is many orders below the matrix entry
// scale, where the quadratic form loses everything to cancellation.
double cip_seminorm(const DofMap& dofs, const VectorField& beta, const StabConfig& stab,
                    const Vector& v);

// Diagonal weights sigma_i = alpha * (max|D|_{w_i} + max|beta|_{w_i} h_i
// + mu h_i^2), patch maxima taken over the quadrature points of the cells
// around node i; |beta| is the euclidean length here.
Vector assemble_s_diag(const DofMap& dofs, const ProblemSpec& prob, double alpha = 1.0);

// sum_i h_i^2 u_i v_i over the dofs selected by `include`.
double lumped_product(const DofMap& dofs, const Vector& u, const Vector& v,
                      const std::vector<uint8_t>& include);

std::vector<uint8_t> interior_mask(const DofMap& dofs);

// Dofs that are solved for: everything except Dirichlet boundary nodes.
std::vector<uint8_t> unknown_mask(const DofMap& dofs, const ProblemSpec& prob);

// g at Dirichlet boundary nodes, zero at every other dof.
Vector dirichlet_extension(const DofMap& dofs, const ProblemSpec& prob);

struct ReducedSystem {
  SparseMat matrix;
  Vector rhs;  // F - A*ug restricted to the unknowns
  std::vector<int> to_global;
  std::vector<int> from_global;  // -1 for eliminated dofs
};

ReducedSystem reduce_system(const SparseMat& A, const Vector& F, const Vector& ug,
                            const std::vector<uint8_t>& unknown);

SparseMat restrict_matrix(const SparseMat& A, const std::vector<int>& to_global,
                          const std::vector<int>& from_global);

// base with the reduced entries written on top of it.
Vector scatter(const Vector& reduced, const std::vector<int>& to_global, const Vector& base);

}  // namespace bpfem
