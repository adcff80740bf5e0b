#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "bpfem/runner.hpp"
#include "bpfem/vtk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOptions {
  int example = 1;
  std::string element = "p1";
  std::string mesh;  // resolved from the element family when empty
  std::vector<int> levels{5, 9, 17, 33, 65, 129};
  double gamma = -1.0, gamma_beta = -1.0, alpha = -1.0, omega = -1.0;
  double tol = 1e-8;
  int max_iter = 3000;
  std::string method = "bpm";
  std::string out = ".";
  bool pretty = false;
  std::string solver = "direct";
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--example", opt.example, "benchmark problem (1..3)")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--element", opt.element, "p1|p2|p3|q1|q2");
  cmd->add_option("--mesh", opt.mesh, "tri-alt|tri-uniform|tri-perturbed|quad");
  cmd->add_option("--levels", opt.levels, "grid points per side, e.g. 5,9,17")
      ->delimiter(',');
  cmd->add_option("--gamma", opt.gamma, "penalty of the full-gradient jump term");
  cmd->add_option("--gamma-beta", opt.gamma_beta, "penalty of the streamline jump term");
  cmd->add_option("--alpha", opt.alpha, "scaling of the diagonal weights");
  cmd->add_option("--omega", opt.omega, "fixed-point damping");
  cmd->add_option("--tol", opt.tol, "fixed-point stopping tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "cap on linear solves per run");
  cmd->add_option("--method", opt.method, "bpm|cip")
      ->check(CLI::IsMember({"bpm", "cip"}));
  cmd->add_option("--out", opt.out, "output directory");
  cmd->add_flag("--pretty", opt.pretty, "aligned tables on stdout");
  cmd->add_option("--solver", opt.solver, "direct|iterative")
      ->check(CLI::IsMember({"direct", "iterative"}));
}

bpfem::RunConfig make_config(const CliOptions& opt) {
  bpfem::RunConfig cfg;
  cfg.example = opt.example;
  cfg.element = bpfem::element_from_string(opt.element);
  std::string mesh = opt.mesh;
  if (mesh.empty()) {
    if (cfg.element.family == bpfem::ElementFamily::Tensor)
      mesh = "quad";
    else
      mesh = opt.example == 1 ? "tri-uniform" : "tri-alt";
  }
  cfg.mesh = bpfem::mesh_family_from_string(mesh);
  const bool mesh_tri = cfg.mesh != bpfem::MeshFamily::Quad;
  const bool elem_tri = cfg.element.family == bpfem::ElementFamily::Simplex;
  if (mesh_tri != elem_tri)
    throw CLI::ValidationError("--element", "element family does not match the mesh family");
  cfg.levels = opt.levels;
  if (cfg.levels.empty()) throw CLI::ValidationError("--levels", "at least one level required");
  for (int n : cfg.levels)
    if (n < 3) throw CLI::ValidationError("--levels", "levels must be >= 3");
  if (opt.gamma >= 0.0) cfg.gamma = opt.gamma;
  if (opt.gamma_beta >= 0.0) cfg.gamma_beta = opt.gamma_beta;
  if (opt.alpha >= 0.0) cfg.alpha = opt.alpha;
  if (opt.omega >= 0.0) cfg.omega = opt.omega;
  cfg.tol = opt.tol;
  cfg.max_iter = opt.max_iter;
  cfg.method = opt.method == "cip" ? bpfem::Method::Cip : bpfem::Method::Bpm;
  cfg.solver = opt.solver == "iterative" ? bpfem::LinearSolverKind::Iterative
                                         : bpfem::LinearSolverKind::Direct;
  return cfg;
}

std::string run_tag(const bpfem::RunConfig& cfg) {
  return "ex" + std::to_string(cfg.example) + "_" + bpfem::to_string(cfg.element) + "_" +
         std::string(bpfem::to_string(cfg.mesh)) +
         (cfg.method == bpfem::Method::Cip ? "_cip" : "");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
}

json config_json(const bpfem::BenchmarkCase& cs, const bpfem::RunConfig& cfg) {
  bpfem::ResolvedSettings rs = bpfem::resolve_settings(cs, cfg);
  json j;
  j["example"] = cfg.example;
  j["element"] = bpfem::to_string(cfg.element);
  j["mesh"] = std::string(bpfem::to_string(cfg.mesh));
  j["levels"] = cfg.levels;
  j["method"] = cfg.method == bpfem::Method::Cip ? "cip" : "bpm";
  j["solver"] = cfg.solver == bpfem::LinearSolverKind::Iterative ? "iterative" : "direct";
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["alpha"] = rs.alpha;
  j["omega"] = rs.omega;
  switch (rs.stab.variant) {
    case bpfem::CipVariant::Normal:
      j["stabilization"] = {{"variant", "normal"}, {"gamma", rs.stab.gamma}};
      break;
    case bpfem::CipVariant::Upwind:
      j["stabilization"] = {{"variant", "upwind"}, {"gamma_beta", rs.stab.gamma_beta}};
      break;
    default:
      j["stabilization"] = {{"variant", "none"}};
  }
  return j;
}

int cmd_convergence(const CliOptions& opt) {
  bpfem::RunConfig cfg = make_config(opt);
  bpfem::BenchmarkCase cs = bpfem::benchmark_case(cfg.example);
  bpfem::StudyResult result = bpfem::convergence_study(cs, cfg, true);

  std::string csv = bpfem::render_csv(result.rows);
  std::fputs(opt.pretty ? bpfem::render_pretty(result.rows).c_str() : csv.c_str(), stdout);

  fs::create_directories(opt.out);
  const std::string tag = run_tag(cfg);
  write_file(fs::path(opt.out) / ("table_" + tag + ".csv"), csv);

  json meta = config_json(cs, cfg);
  meta["command"] = "convergence";
  meta["results"] = json::array();
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    json r = {{"n", row.n},
              {"iterations", row.iterations},
              {"converged", row.converged},
              {"seconds", result.solutions[i].solve_seconds}};
    if (row.has_errors) {
      r["err_l2"] = row.err_l2;
      r["err_h"] = row.err_h;
      r["norm_s_minus"] = row.norm_s_minus;
    }
    meta["results"].push_back(r);
  }
  write_file(fs::path(opt.out) / ("run_" + tag + ".json"), meta.dump(2) + "\n");
  return 0;
}

int cmd_layers(const CliOptions& opt) {
  bpfem::RunConfig cfg = make_config(opt);
  bpfem::BenchmarkCase cs = bpfem::benchmark_case(cfg.example);
  const int n = cfg.levels.back();

  bpfem::LevelSolution bpm = bpfem::solve_level(cs, cfg, n);
  bpfem::RunConfig cip_cfg = cfg;
  cip_cfg.method = bpfem::Method::Cip;
  bpfem::LevelSolution cip = bpfem::solve_level(cs, cip_cfg, n);

  fs::create_directories(opt.out);
  const std::string tag = run_tag(cfg) + "_n" + std::to_string(n);

  bpfem::write_vtk(*bpm.mesh,
                   {{"u_plus", bpfem::vertex_values(*bpm.dofs, bpm.u_plus_full)},
                    {"u_minus", bpfem::vertex_values(*bpm.dofs, bpm.u_minus_full)},
                    {"u_cip", bpfem::vertex_values(*cip.dofs, cip.u_full)}},
                   (fs::path(opt.out) / ("field_" + tag + ".vtk")).string(),
                   "bound-preserving solution");

  auto section = [&](const bpfem::LevelSolution& sol, const bpfem::Vector& coeffs,
                     std::string_view line, const std::string& name) {
    bpfem::CrossSection sec = bpfem::cross_section_named(*sol.dofs, coeffs, line);
    std::string fname = "section_" + tag + "_" + name + ".csv";
    write_file(fs::path(opt.out) / fname, bpfem::render_section_csv(sec));
  };
  section(bpm, bpm.u_plus_full, "y=x", "diag_u_plus");
  section(cip, cip.u_full, "y=x", "diag_u_cip");
  if (cfg.example == 3) {
    section(bpm, bpm.u_minus_full, "x=0.9", "x09_u_minus");
    section(bpm, bpm.u_plus_full, "x=0.9", "x09_u_plus");
  }

  json meta = config_json(cs, cfg);
  meta["command"] = "layers";
  meta["n"] = n;
  meta["iterations"] = bpm.iterations;
  meta["converged"] = bpm.converged;
  meta["seconds"] = bpm.solve_seconds;
  write_file(fs::path(opt.out) / ("run_" + tag + ".json"), meta.dump(2) + "\n");

  std::printf("n=%d iterations=%s dofs=%d\n", n,
              bpm.converged ? std::to_string(bpm.iterations).c_str() : "NC", bpm.dofs->size());
  return 0;
}

int cmd_mesh_info(const CliOptions& opt) {
  std::string mesh_name = opt.mesh.empty() ? "tri-uniform" : opt.mesh;
  bpfem::MeshFamily family = bpfem::mesh_family_from_string(mesh_name);
  for (int n : opt.levels) {
    bpfem::Mesh mesh = bpfem::build_structured_mesh(family, n);
    bpfem::AngleStats ang = bpfem::angle_stats(mesh);
    std::vector<double> h = bpfem::mesh_function(mesh);
    double hmin = h[0], hmax = h[0];
    for (double v : h) {
      hmin = std::min(hmin, v);
      hmax = std::max(hmax, v);
    }
    std::printf(
        "%s n=%d vertices=%zu cells=%zu facets=%zu interior_facets=%d "
        "angles=[%.2f,%.2f] mesh_function=[%.6g,%.6g] delaunay_violations=%d\n",
        mesh_name.c_str(), n, mesh.vertices.size(), mesh.cells.size(), mesh.facets.size(),
        mesh.interior_facet_count(), ang.min_deg, ang.max_deg, hmin, hmax,
        bpfem::delaunay_violations(mesh));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound-preserving finite element solver for convection-diffusion-reaction"};
  app.require_subcommand(1);
  CliOptions opt;

  CLI::App* conv = app.add_subcommand("convergence", "error and iteration tables over levels");
  add_common_flags(conv, opt);
  CLI::App* layers = app.add_subcommand("layers", "solution profiles at the finest level");
  add_common_flags(layers, opt);
  CLI::App* info = app.add_subcommand("mesh-info", "mesh statistics per level");
  info->add_option("--mesh", opt.mesh, "mesh family");
  info->add_option("--levels", opt.levels, "grid points per side")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) return cmd_convergence(opt);
    if (layers->parsed()) return cmd_layers(opt);
    return cmd_mesh_info(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
