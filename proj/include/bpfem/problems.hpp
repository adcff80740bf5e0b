#pragma once

#include <string>

#include "bpfem/assembly.hpp"

namespace bpfem {

// A benchmark problem together with the solver settings used in the
// experiments.  alpha = 1 throughout.
struct BenchmarkCase {
  std::string name;
  ProblemSpec problem;
  StabConfig stab_simplex;  // recommended penalty on triangular meshes
  StabConfig stab_tensor;   // recommended penalty on quadrilateral meshes
  double omega = 1.0;
  double omega_unstabilized = 1.0;  // damping when the penalty is switched off
  ScalarField exact;                // empty when no closed-form solution exists
  VectorField exact_gradient;

  const StabConfig& stab_for(ElementFamily family) const {
    return family == ElementFamily::Simplex ? stab_simplex : stab_tensor;
  }
};

// Smooth manufactured solution u = 100 sin(pi x) sin(pi y), anisotropic
// nonconstant diffusion, beta = (2,1), mu = 1, bounds [0,100].
BenchmarkCase example1(double eps = 1e-5);

// Rotating flow beta = (-y,x) transporting a three-state inflow profile,
// mu = 0, f = 0, bounds [0,1]; outflow boundary left free.
BenchmarkCase example2(double eps = 1e-5);

// Constant skew flow at 60 degrees with a discontinuous Dirichlet datum,
// mu = 0, f = 0, bounds [0,1].
BenchmarkCase example3(double eps = 1e-5);

BenchmarkCase benchmark_case(int id);

}  // namespace bpfem
