#include "bpfem/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bpfem {

ResolvedSettings resolve_settings(const BenchmarkCase& cs, const RunConfig& cfg) {
  ResolvedSettings rs;
  rs.stab = cs.stab_for(cfg.element.family);
  if (cfg.gamma) {
    rs.stab.variant = CipVariant::Normal;
    rs.stab.gamma = *cfg.gamma;
  }
  if (cfg.gamma_beta) {
    rs.stab.variant = CipVariant::Upwind;
    rs.stab.gamma_beta = *cfg.gamma_beta;
  }
  const bool no_penalty = (rs.stab.variant == CipVariant::Normal && rs.stab.gamma == 0.0) ||
                          (rs.stab.variant == CipVariant::Upwind && rs.stab.gamma_beta == 0.0);
  if (no_penalty) rs.stab.variant = CipVariant::None;
  rs.alpha = cfg.alpha.value_or(1.0);
  rs.omega = cfg.omega.value_or(no_penalty ? cs.omega_unstabilized : cs.omega);
  return rs;
}

LevelSolution solve_level(const BenchmarkCase& cs, const RunConfig& cfg, int n) {
  const auto t0 = std::chrono::steady_clock::now();
  ResolvedSettings rs = resolve_settings(cs, cfg);

  LevelSolution sol;
  sol.mesh = std::make_shared<Mesh>(build_structured_mesh(cfg.mesh, n));
  sol.dofs = std::make_shared<DofMap>(build_dof_map(*sol.mesh, cfg.element));
  sol.kappa = cs.problem.kappa;

  const DofMap& dofs = *sol.dofs;
  GalerkinSystem gal = assemble_galerkin(cs.problem, dofs);
  sol.stab_cfg = rs.stab;
  sol.stab = assemble_cip(dofs, cs.problem.velocity, rs.stab);
  SparseMat a = gal.matrix;
  if (sol.stab.nonZeros() > 0) a = a + sol.stab;

  Vector ug = dirichlet_extension(dofs, cs.problem);
  sol.unknowns = unknown_mask(dofs, cs.problem);
  ReducedSystem red = reduce_system(a, gal.load, ug, sol.unknowns);
  sol.to_global = red.to_global;

  Vector sigma = assemble_s_diag(dofs, cs.problem, rs.alpha);
  sol.sigma_red.resize(red.to_global.size());
  for (size_t r = 0; r < red.to_global.size(); ++r) sol.sigma_red[r] = sigma[red.to_global[r]];

  Vector u_red, u_plus_red, u_minus_red;
  if (cfg.method == Method::Cip) {
    LinearSolver solver(red.matrix, cfg.solver);
    u_red = solver.solve(red.rhs);
    u_plus_red = u_red;
    u_minus_red = Vector::Zero(u_red.size());
    sol.iterations = 1;
    sol.converged = true;
  } else {
    SparseMat m_red = restrict_matrix(assemble_mass(dofs), red.to_global, red.from_global);
    FixedPointConfig fp;
    fp.omega = rs.omega;
    fp.tol = cfg.tol;
    fp.max_iter = cfg.max_iter;
    fp.linear = cfg.solver;
    SolveReport rep = richardson(red.matrix, sol.sigma_red, red.rhs,
                                 AdmissibleBox{0.0, cs.problem.kappa}, fp, m_red);
    u_red = std::move(rep.u);
    u_plus_red = std::move(rep.u_plus);
    u_minus_red = std::move(rep.u_minus);
    sol.iterations = rep.iterations;
    sol.converged = rep.converged;
  }

  Vector zero = Vector::Zero(dofs.size());
  sol.u_full = scatter(u_red, red.to_global, ug);
  sol.u_plus_full = scatter(u_plus_red, red.to_global, ug);
  sol.u_minus_full = scatter(u_minus_red, red.to_global, zero);
  sol.u_minus_red = std::move(u_minus_red);

  sol.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

StudyResult convergence_study(const BenchmarkCase& cs, const RunConfig& cfg,
                              bool keep_solutions) {
  StudyResult result;
  std::vector<double> e_l2, e_h, e_s;
  for (int n : cfg.levels) {
    LevelSolution sol = solve_level(cs, cfg, n);
    ConvergenceRow row;
    row.n = n;
    row.iterations = sol.iterations;
    row.converged = sol.converged;
    if (cs.exact) {
      row.has_errors = true;
      row.err_l2 = error_l2(*sol.dofs, sol.u_plus_full, cs.exact);
      row.err_h = error_energy(
          *sol.dofs, sol.u_plus_full, cs.problem,
          cip_seminorm(*sol.dofs, cs.problem.velocity, sol.stab_cfg, sol.u_plus_full), cs.exact,
          cs.exact_gradient);
      row.norm_s_minus = norm_s(sol.sigma_red, sol.u_minus_red);
      e_l2.push_back(row.err_l2);
      e_h.push_back(row.err_h);
      e_s.push_back(row.norm_s_minus);
    }
    result.rows.push_back(row);
    if (keep_solutions) result.solutions.push_back(std::move(sol));
  }
  if (!e_l2.empty() && e_l2.size() == result.rows.size()) {
    std::vector<double> r_l2 = eoc(e_l2, cfg.levels);
    std::vector<double> r_h = eoc(e_h, cfg.levels);
    std::vector<double> r_s = eoc(e_s, cfg.levels);
    for (size_t i = 0; i < result.rows.size(); ++i) {
      result.rows[i].eoc_l2 = r_l2[i];
      result.rows[i].eoc_h = r_h[i];
      result.rows[i].eoc_s = r_s[i];
    }
  }
  return result;
}

namespace {

std::string format_err(double v, bool present) {
  if (!present) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string format_eoc(double v, bool present) {
  if (!present || std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_itr(const ConvergenceRow& row) {
  return row.converged ? std::to_string(row.iterations) : std::string("NC");
}

}  // namespace

std::string render_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "N,Itr,err_L2,EOC,err_h,EOC,norm_s_minus,EOC\n";
  for (const ConvergenceRow& r : rows) {
    out += std::to_string(r.n) + "," + format_itr(r) + "," + format_err(r.err_l2, r.has_errors) +
           "," + format_eoc(r.eoc_l2, r.has_errors) + "," + format_err(r.err_h, r.has_errors) +
           "," + format_eoc(r.eoc_h, r.has_errors) + "," +
           format_err(r.norm_s_minus, r.has_errors) + "," + format_eoc(r.eoc_s, r.has_errors) +
           "\n";
  }
  return out;
}

std::string render_pretty(const std::vector<ConvergenceRow>& rows) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%5s %5s %12s %6s %12s %6s %12s %6s\n", "N", "Itr", "err_L2",
                "EOC", "err_h", "EOC", "||u-||_s", "EOC");
  std::string out = buf;
  for (const ConvergenceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%5d %5s %12s %6s %12s %6s %12s %6s\n", r.n,
                  format_itr(r).c_str(), format_err(r.err_l2, r.has_errors).c_str(),
                  format_eoc(r.eoc_l2, r.has_errors).c_str(),
                  format_err(r.err_h, r.has_errors).c_str(),
                  format_eoc(r.eoc_h, r.has_errors).c_str(),
                  format_err(r.norm_s_minus, r.has_errors).c_str(),
                  format_eoc(r.eoc_s, r.has_errors).c_str());
    out += buf;
  }
  return out;
}

std::string render_section_csv(const CrossSection& cs) {
  std::string out = "t,x,y,value\n";
  char buf[128];
  for (size_t i = 0; i < cs.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.8e,%.8e,%.8e,%.10e\n", cs.t[i], cs.points[i].x,
                  cs.points[i].y, cs.values[i]);
    out += buf;
  }
  return out;
}

std::vector<double> vertex_values(const DofMap& dofs, const Vector& coeffs) {
  std::vector<double> out(dofs.vertex_dof.size());
  for (size_t v = 0; v < out.size(); ++v) out[v] = coeffs[dofs.vertex_dof[v]];
  return out;
}

}  // namespace bpfem
