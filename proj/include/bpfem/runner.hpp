#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bpfem/analysis.hpp"
#include "bpfem/problems.hpp"
#include "bpfem/solver.hpp"

namespace bpfem {

enum class Method { Bpm, Cip };

struct RunConfig {
  int example = 1;
  ElementSpec element{ElementFamily::Simplex, 1};
  MeshFamily mesh = MeshFamily::TriUniform;
  std::vector<int> levels{5, 9, 17, 33, 65, 129};
  std::optional<double> gamma;       // overrides the recommended penalties
  std::optional<double> gamma_beta;
  std::optional<double> alpha;
  std::optional<double> omega;
  double tol = 1e-8;
  int max_iter = 3000;
  Method method = Method::Bpm;
  LinearSolverKind solver = LinearSolverKind::Direct;
};

// Stabilization and damping actually used for a run, after CLI overrides.
struct ResolvedSettings {
  StabConfig stab;
  double alpha = 1.0;
  double omega = 1.0;
};

ResolvedSettings resolve_settings(const BenchmarkCase& cs, const RunConfig& cfg);

struct LevelSolution {
  std::shared_ptr<Mesh> mesh;
  std::shared_ptr<DofMap> dofs;
  Vector u_full, u_plus_full, u_minus_full;
  Vector sigma_red, u_minus_red;
  std::vector<int> to_global;
  std::vector<uint8_t> unknowns;
  SparseMat stab;       // jump-penalty matrix over all dofs
  StabConfig stab_cfg;  // penalty actually used, after overrides
  int iterations = 0;
  bool converged = false;
  double kappa = 1.0;
  double solve_seconds = 0.0;
};

LevelSolution solve_level(const BenchmarkCase& cs, const RunConfig& cfg, int n);

struct ConvergenceRow {
  int n = 0;
  int iterations = 0;
  bool converged = false;
  double err_l2 = 0.0, err_h = 0.0, norm_s_minus = 0.0;
  double eoc_l2 = 0.0, eoc_h = 0.0, eoc_s = 0.0;  // NaN when undefined
  bool has_errors = false;
};

struct StudyResult {
  std::vector<ConvergenceRow> rows;
  std::vector<LevelSolution> solutions;
};

StudyResult convergence_study(const BenchmarkCase& cs, const RunConfig& cfg,
                              bool keep_solutions = false);

std::string render_csv(const std::vector<ConvergenceRow>& rows);
std::string render_pretty(const std::vector<ConvergenceRow>& rows);
std::string render_section_csv(const CrossSection& cs);

// Coefficients at the mesh vertices, for export.
std::vector<double> vertex_values(const DofMap& dofs, const Vector& coeffs);

}  // namespace bpfem
