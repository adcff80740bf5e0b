#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bpfem/mesh.hpp"

namespace bpfem {

// Legacy ASCII unstructured-grid file with one scalar array per field;
// values are attached to the mesh vertices.
void write_vtk(const Mesh& mesh,
               const std::vector<std::pair<std::string, std::vector<double>>>& vertex_fields,
               const std::string& path, const std::string& title = "bpfem");

}  // namespace bpfem
