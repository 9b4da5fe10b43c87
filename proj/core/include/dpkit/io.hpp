#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include "dpkit/exponent_field.hpp"
#include "dpkit/function.hpp"

namespace dpkit {

/// nodes.csv (index,x,y), elements.csv (index,v0,v1[,v2]) and boundary.csv (node) in `dir`.
void write_mesh_csv(const std::filesystem::path& dir, const Mesh& mesh);
/// Inverse of write_mesh_csv. Throws InvalidInput on malformed files.
Mesh read_mesh_csv(const std::filesystem::path& dir);

/// "node_index,x[,y],value" with 17 significant digits.
void write_solution_csv(std::ostream& out, const DiscreteFunction& u);
void write_solution_csv(const std::filesystem::path& path, const DiscreteFunction& u);

/// Reads "node_index,...,value" rows (first and last column; an optional header is skipped).
/// Throws InvalidInput unless every node of the mesh appears exactly once.
DiscreteFunction read_function_csv(const std::filesystem::path& path, std::shared_ptr<const Mesh> mesh);

/// Tabulated field from "node-index,value" rows.
ExponentField read_field_table(const std::filesystem::path& path, std::shared_ptr<const Mesh> mesh);

/// Legacy VTK unstructured grid with the nodal values as point data.
void write_vtk(const std::filesystem::path& path, const DiscreteFunction& u, const std::string& name = "u");

}  // namespace dpkit
