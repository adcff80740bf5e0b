#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string_view>
#include <vector>

#include "bpfem/mesh.hpp"
#include "bpfem/quadrature.hpp"

namespace bpfem {

using Vector = Eigen::VectorXd;
using ScalarField = std::function<double(Vec2)>;

enum class ElementFamily { Simplex, Tensor };

struct ElementSpec {
  ElementFamily family = ElementFamily::Simplex;
  int degree = 1;
};

// Accepts "p1".."p3" and "q1".."q2".
ElementSpec element_from_string(std::string_view name);
std::string to_string(ElementSpec spec);

// Nodes of the reference element in canonical local order: corners first,
// then edge nodes (per edge, walking from its first to its second corner),
// then interior nodes.
struct LocalNode {
  enum class Kind { Vertex, Edge, Interior } kind = Kind::Vertex;
  int a = 0;  // Vertex: corner id.  Edge: first corner.  Interior: index.
  int b = 0;  // Edge: second corner.
  int m = 0;  // Edge: lattice position 1..degree-1 measured from corner a.
  Vec2 ref;
};

struct ReferenceElement {
  ElementSpec spec;
  int ndofs = 0;
  std::vector<LocalNode> nodes;

  std::vector<double> eval(Vec2 p) const;
  std::vector<Vec2> eval_grad(Vec2 p) const;
};

const ReferenceElement& reference_element(ElementSpec spec);

// Affine cell map x = v0 + B*ref with B = [e1 e2].
struct CellGeometry {
  Vec2 v0, e1, e2;
  double det = 0.0;
};

CellGeometry cell_geometry(const Mesh& mesh, int cell);
Vec2 physical_gradient(const CellGeometry& g, Vec2 ref_grad);

// Global Lagrange space on a mesh.  Nodes are numbered lexicographically by
// coordinates (x first, snapped to 1e-12) so that the numbering is stable
// across runs.  The mesh must outlive the map.
struct DofMap {
  ElementSpec spec;
  const Mesh* mesh = nullptr;
  std::vector<Vec2> nodes;
  std::vector<uint8_t> on_boundary;
  std::vector<std::vector<int>> cell_dofs;   // cell -> local-to-global
  std::vector<std::vector<int>> node_cells;  // dof -> sorted adjacent cells
  std::vector<double> h_node;                // mesh function at each node
  std::vector<int> vertex_dof;               // mesh vertex -> dof index

  int size() const { return static_cast<int>(nodes.size()); }
  int interior_count() const;
};

DofMap build_dof_map(const Mesh& mesh, ElementSpec spec);

// Nodal interpolation; throws std::domain_error on non-finite samples.
Vector interpolate(const DofMap& dofs, const ScalarField& f);

// L2 projection onto the full space (consistent mass matrix).
Vector l2_project(const DofMap& dofs, const ScalarField& f);

double evaluate(const DofMap& dofs, const Vector& coeffs, Vec2 p);
double evaluate_in_cell(const DofMap& dofs, const Vector& coeffs, int cell, Vec2 ref);
Vec2 gradient_in_cell(const DofMap& dofs, const Vector& coeffs, int cell, Vec2 ref);

// Quadrature matching the cell shape.
QuadratureRule cell_quadrature(CellKind kind, int required_degree);

}  // namespace bpfem
