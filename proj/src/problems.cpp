#include "bpfem/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bpfem {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryTol = 1e-12;
}  // namespace

BenchmarkCase example1(double eps) {
  BenchmarkCase cs;
  cs.name = "example1";
  cs.problem.diffusion = [eps](Vec2 p) {
    Matrix2 d;
    d << 100.0, std::cos(p.x), std::cos(p.x), 1.0;
    return Matrix2(eps * d);
  };
  cs.problem.velocity = [](Vec2) { return Vec2{2.0, 1.0}; };
  cs.problem.reaction = 1.0;
  cs.problem.kappa = 100.0;
  cs.problem.boundary_value = [](Vec2) { return 0.0; };

  cs.exact = [](Vec2 p) { return 100.0 * std::sin(kPi * p.x) * std::sin(kPi * p.y); };
  cs.exact_gradient = [](Vec2 p) {
    return Vec2{100.0 * kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y),
                100.0 * kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y)};
  };
  cs.problem.source = [eps](Vec2 p) {
    const double sx = std::sin(kPi * p.x), cx = std::cos(kPi * p.x);
    const double sy = std::sin(kPi * p.y), cy = std::cos(kPi * p.y);
    const double u = 100.0 * sx * sy;
    const double ux = 100.0 * kPi * cx * sy;
    const double uy = 100.0 * kPi * sx * cy;
    const double uxx = -kPi * kPi * u;
    const double uyy = -kPi * kPi * u;
    const double uxy = 100.0 * kPi * kPi * cx * cy;
    const double diff = eps * (100.0 * uxx + 2.0 * std::cos(p.x) * uxy - std::sin(p.x) * uy + uyy);
    return -diff + 2.0 * ux + uy + u;
  };

  cs.stab_simplex = {CipVariant::Normal, 0.025, 0.0};
  cs.stab_tensor = {CipVariant::Normal, 0.025, 0.0};
  cs.omega = 1.0;
  cs.omega_unstabilized = 1.0;
  return cs;
}

BenchmarkCase example2(double eps) {
  BenchmarkCase cs;
  cs.name = "example2";
  cs.problem.diffusion = [eps](Vec2) { return Matrix2(eps * Matrix2::Identity()); };
  cs.problem.velocity = [](Vec2 p) { return Vec2{-p.y, p.x}; };
  cs.problem.reaction = 0.0;
  cs.problem.source = [](Vec2) { return 0.0; };
  cs.problem.kappa = 1.0;
  // inflow: right side and bottom; the outflow (left side and top) is free
  cs.problem.dirichlet_region = [](Vec2 p) {
    return p.x > 1.0 - kBoundaryTol || p.y < kBoundaryTol;
  };
  cs.problem.boundary_value = [](Vec2 p) {
    if (p.y < kBoundaryTol) {
      if (p.x <= 1.0 / 3.0) return 0.0;
      if (p.x < 2.0 / 3.0) return 0.5;
      return 1.0;
    }
    return 1.0;
  };

  cs.stab_simplex = {CipVariant::Upwind, 0.0, 0.05};
  cs.stab_tensor = {CipVariant::Upwind, 0.0, 0.05};
  cs.omega = 0.1;
  cs.omega_unstabilized = 0.05;
  return cs;
}

BenchmarkCase example3(double eps) {
  BenchmarkCase cs;
  cs.name = "example3";
  cs.problem.diffusion = [eps](Vec2) { return Matrix2(eps * Matrix2::Identity()); };
  const Vec2 beta{std::cos(kPi / 3.0), std::sin(kPi / 3.0)};
  cs.problem.velocity = [beta](Vec2) { return beta; };
  cs.problem.reaction = 0.0;
  cs.problem.source = [](Vec2) { return 0.0; };
  cs.problem.kappa = 1.0;
  cs.problem.boundary_value = [](Vec2 p) {
    return (p.x < kBoundaryTol || p.y > 1.0 - kBoundaryTol) ? 1.0 : 0.0;
  };

  cs.stab_simplex = {CipVariant::Normal, 0.01, 0.0};
  cs.stab_tensor = {CipVariant::Upwind, 0.0, 0.01};
  cs.omega = 0.1;
  cs.omega_unstabilized = 0.1;
  return cs;
}

BenchmarkCase benchmark_case(int id) {
  switch (id) {
    case 1: return example1();
    case 2: return example2();
    case 3: return example3();
  }
  throw std::invalid_argument("benchmark_case: id must be 1, 2 or 3");
}

}  // namespace bpfem
