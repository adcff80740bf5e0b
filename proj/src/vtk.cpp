#include "bpfem/vtk.hpp"

#include <cstdio>
#include <stdexcept>

namespace bpfem {

void write_vtk(const Mesh& mesh,
               const std::vector<std::pair<std::string, std::vector<double>>>& vertex_fields,
               const std::string& path, const std::string& title) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("write_vtk: cannot open " + path);

  std::fprintf(fp, "# vtk DataFile Version 3.0\n%s\nASCII\nDATASET UNSTRUCTURED_GRID\n",
               title.c_str());
  std::fprintf(fp, "POINTS %zu double\n", mesh.vertices.size());
  for (const Vec2& p : mesh.vertices) std::fprintf(fp, "%.12g %.12g 0\n", p.x, p.y);

  size_t list_size = 0;
  for (const Cell& c : mesh.cells) list_size += 1 + c.nv;
  std::fprintf(fp, "CELLS %zu %zu\n", mesh.cells.size(), list_size);
  for (const Cell& c : mesh.cells) {
    std::fprintf(fp, "%d", c.nv);
    for (int k = 0; k < c.nv; ++k) std::fprintf(fp, " %d", c.v[k]);
    std::fprintf(fp, "\n");
  }
  std::fprintf(fp, "CELL_TYPES %zu\n", mesh.cells.size());
  for (const Cell& c : mesh.cells)
    std::fprintf(fp, "%d\n", c.kind == CellKind::Triangle ? 5 : 9);

  if (!vertex_fields.empty()) {
    std::fprintf(fp, "POINT_DATA %zu\n", mesh.vertices.size());
    for (const auto& [name, values] : vertex_fields) {
      if (values.size() != mesh.vertices.size()) {
        std::fclose(fp);
        throw std::invalid_argument("write_vtk: field " + name + " has wrong size");
      }
      std::fprintf(fp, "SCALARS %s double 1\nLOOKUP_TABLE default\n", name.c_str());
      for (double v : values) std::fprintf(fp, "%.12g\n", v);
    }
  }
  std::fclose(fp);
}

}  // namespace bpfem
