#include "bpfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bpfem {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int npts) {
  if (npts < 1) throw std::invalid_argument("gauss_legendre_01: npts >= 1 required");
  std::vector<double> x(npts), w(npts);
  // Newton iteration on P_n with Chebyshev initial guesses; nodes on [-1,1]
  // are then shifted to [0,1].
  for (int i = 0; i < npts; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < npts; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = npts * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 - z);  // descending z -> ascending x
    w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
  }
  return {x, w};
}

QuadratureRule triangle_quadrature(int required_degree) {
  if (required_degree > 12)
    throw std::invalid_argument("triangle_quadrature: degree > 12 not supported");
  QuadratureRule rule;
  rule.exactness = std::max(required_degree, 0);
  if (required_degree <= 1) {
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    return rule;
  }
  if (required_degree == 2) {
    rule.points = {{0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  }
  // Collapsed tensor rule: x = u, y = v(1-u) maps [0,1]^2 onto the triangle
  // with Jacobian (1-u).  A degree-d integrand becomes degree d+1 in u and
  // degree d in v, so ceil((d+2)/2) points per direction are enough.
  int npts = (required_degree + 3) / 2;
  auto [gx, gw] = gauss_legendre_01(npts);
  for (int i = 0; i < npts; ++i) {
    for (int j = 0; j < npts; ++j) {
      double u = gx[i], v = gx[j];
      rule.points.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(gw[i] * gw[j] * (1.0 - u));
    }
  }
  return rule;
}

QuadratureRule square_quadrature(int required_degree) {
  if (required_degree > 12)
    throw std::invalid_argument("square_quadrature: degree > 12 not supported");
  int npts = std::max(1, (required_degree + 2) / 2);
  auto [gx, gw] = gauss_legendre_01(npts);
  QuadratureRule rule;
  rule.exactness = std::max(required_degree, 0);
  for (int i = 0; i < npts; ++i)
    for (int j = 0; j < npts; ++j) {
      rule.points.push_back({gx[i], gx[j]});
      rule.weights.push_back(gw[i] * gw[j]);
    }
  return rule;
}

}  // namespace bpfem
