#pragma once

#include <string_view>
#include <vector>

#include "bpfem/assembly.hpp"
#include "bpfem/projection.hpp"

namespace bpfem {

// || exact - u_h ||_0 by cellwise quadrature (degree 2k+2 by default).
double error_l2(const DofMap& dofs, const Vector& uh, const ScalarField& exact,
                int quad_degree = -1);

// Energy norm of the error: diffusion seminorm + reaction L2 term of
// exact - u_h, plus `cip_term` (the jump penalty evaluated on u_h itself,
// see cip_seminorm). Passing the precomputed facet-wise value instead of a
// penalty matrix keeps the jump contribution a sum of squares; the quadratic
// form u'Ju cancels catastrophically once the true value drops below the
// entry scale times machine epsilon, which happens for cubic elements on
// fine meshes.
double error_energy(const DofMap& dofs, const Vector& uh, const ProblemSpec& prob,
                    double cip_term, const ScalarField& exact,
                    const VectorField& exact_grad, int quad_degree = -1);

// sqrt(sum sigma_i v_i^2); the two vectors live on the same index set.
double norm_s(const Vector& sigma, const Vector& v);

// Experimental orders ln(e_{i-1}/e_i) / ln(N_i/N_{i-1}); NaN where undefined.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<int>& ns);

struct CrossSection {
  std::vector<double> t;  // arc length from the first endpoint
  std::vector<Vec2> points;
  std::vector<double> values;
};

CrossSection cross_section(const DofMap& dofs, const Vector& coeffs, Vec2 p0, Vec2 p1,
                           int samples = 10000);

// Named lines: "y=x" (diagonal), "x=<c>" and "y=<c>" (axis-parallel chords).
CrossSection cross_section_named(const DofMap& dofs, const Vector& coeffs, std::string_view line,
                                 int samples = 10000);

struct BoundsAudit {
  double nodal_min = 0.0;
  double nodal_max = 0.0;
  double sample_min = 0.0;
  double sample_max = 0.0;
  int samples = 0;
};

// Extrema of the coefficients and of point samples at deterministically
// seeded random positions.
BoundsAudit bounds_audit(const DofMap& dofs, const Vector& coeffs, int samples,
                         unsigned long long seed = 20240601ull);

}  // namespace bpfem
