#pragma once

#include <utility>
#include <vector>

#include "bpfem/geometry.hpp"

namespace bpfem {

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to the reference measure
  int exactness = 0;
};

// Gauss-Legendre nodes and weights on [0,1]; exact for degree 2*npts-1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int npts);

// Rule on the reference triangle {x,y >= 0, x+y <= 1}, exact for all
// polynomials of total degree <= required_degree (supported up to 12).
QuadratureRule triangle_quadrature(int required_degree);

// Tensor Gauss rule on [0,1]^2, exact per variable up to required_degree.
QuadratureRule square_quadrature(int required_degree);

}  // namespace bpfem
