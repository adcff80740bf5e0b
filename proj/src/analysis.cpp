#include "bpfem/analysis.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace bpfem {

double error_l2(const DofMap& dofs, const Vector& uh, const ScalarField& exact, int quad_degree) {
  const Mesh& mesh = *dofs.mesh;
  const ReferenceElement& re = reference_element(dofs.spec);
  const int deg = quad_degree >= 0 ? quad_degree : 2 * dofs.spec.degree + 2;
  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    QuadratureRule rule = cell_quadrature(mesh.cells[c].kind, deg);
    CellGeometry geom = cell_geometry(mesh, c);
    const auto& gd = dofs.cell_dofs[c];
    for (size_t q = 0; q < rule.points.size(); ++q) {
      std::vector<double> phi = re.eval(rule.points[q]);
      double vh = 0.0;
      for (int i = 0; i < re.ndofs; ++i) vh += uh[gd[i]] * phi[i];
      double diff = exact(map_to_physical(mesh, c, rule.points[q])) - vh;
      acc += rule.weights[q] * std::abs(geom.det) * diff * diff;
    }
  }
  return std::sqrt(acc);
}

double error_energy(const DofMap& dofs, const Vector& uh, const ProblemSpec& prob,
                    double cip_term, const ScalarField& exact,
                    const VectorField& exact_grad, int quad_degree) {
  const Mesh& mesh = *dofs.mesh;
  const ReferenceElement& re = reference_element(dofs.spec);
  const int deg = quad_degree >= 0 ? quad_degree : 2 * dofs.spec.degree + 2;
  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    QuadratureRule rule = cell_quadrature(mesh.cells[c].kind, deg);
    CellGeometry geom = cell_geometry(mesh, c);
    const auto& gd = dofs.cell_dofs[c];
    for (size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 x = map_to_physical(mesh, c, rule.points[q]);
      std::vector<double> phi = re.eval(rule.points[q]);
      std::vector<Vec2> gphi = re.eval_grad(rule.points[q]);
      double vh = 0.0;
      Vec2 gh;
      for (int i = 0; i < re.ndofs; ++i) {
        vh += uh[gd[i]] * phi[i];
        gh = gh + uh[gd[i]] * physical_gradient(geom, gphi[i]);
      }
      double ev = exact(x) - vh;
      Vec2 eg = exact_grad(x) - gh;
      Matrix2 d = prob.diffusion(x);
      double dform = eg.x * (d(0, 0) * eg.x + d(0, 1) * eg.y) +
                     eg.y * (d(1, 0) * eg.x + d(1, 1) * eg.y);
      acc += rule.weights[q] * std::abs(geom.det) * (dform + prob.reaction * ev * ev);
    }
  }
  if (cip_term < 0.0) throw std::invalid_argument("error_energy: negative jump term");
  return std::sqrt(acc + cip_term);
}

double norm_s(const Vector& sigma, const Vector& v) {
  if (sigma.size() != v.size()) throw std::invalid_argument("norm_s: size mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += sigma[i] * v[i] * v[i];
  return std::sqrt(acc);
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<int>& ns) {
  if (errors.size() != ns.size()) throw std::invalid_argument("eoc: size mismatch");
  std::vector<double> rates(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (size_t i = 1; i < errors.size(); ++i) {
    if (errors[i - 1] > 0.0 && errors[i] > 0.0 && ns[i] > ns[i - 1])
      rates[i] = std::log(errors[i - 1] / errors[i]) /
                 std::log(static_cast<double>(ns[i]) / ns[i - 1]);
  }
  return rates;
}

CrossSection cross_section(const DofMap& dofs, const Vector& coeffs, Vec2 p0, Vec2 p1,
                           int samples) {
  if (samples < 2) throw std::invalid_argument("cross_section: need at least 2 samples");
  CrossSection cs;
  cs.t.reserve(samples);
  cs.points.reserve(samples);
  cs.values.reserve(samples);
  const double len = norm(p1 - p0);
  for (int i = 0; i < samples; ++i) {
    double s = static_cast<double>(i) / (samples - 1);
    Vec2 p = p0 + s * (p1 - p0);
    cs.t.push_back(s * len);
    cs.points.push_back(p);
    cs.values.push_back(evaluate(dofs, coeffs, p));
  }
  return cs;
}

CrossSection cross_section_named(const DofMap& dofs, const Vector& coeffs, std::string_view line,
                                 int samples) {
  if (line == "y=x") return cross_section(dofs, coeffs, {0.0, 0.0}, {1.0, 1.0}, samples);
  if (line.size() > 2 && (line[0] == 'x' || line[0] == 'y') && line[1] == '=') {
    double c = std::stod(std::string(line.substr(2)));
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("cross_section_named: chord outside domain");
    if (line[0] == 'x') return cross_section(dofs, coeffs, {c, 0.0}, {c, 1.0}, samples);
    return cross_section(dofs, coeffs, {0.0, c}, {1.0, c}, samples);
  }
  throw std::invalid_argument("cross_section_named: unknown line " + std::string(line));
}

BoundsAudit bounds_audit(const DofMap& dofs, const Vector& coeffs, int samples,
                         unsigned long long seed) {
  BoundsAudit audit;
  audit.nodal_min = coeffs.minCoeff();
  audit.nodal_max = coeffs.maxCoeff();
  audit.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int s = 0; s < samples; ++s) {
    Vec2 p{unit(rng), unit(rng)};
    double v = evaluate(dofs, coeffs, p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  audit.sample_min = samples > 0 ? lo : 0.0;
  audit.sample_max = samples > 0 ? hi : 0.0;
  return audit;
}

}  // namespace bpfem
