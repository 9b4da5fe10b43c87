#include "dpkit/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "dpkit/errors.hpp"

namespace dpkit {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out.precision(17);
  return out;
}

/// Numeric rows of a CSV file; a first line that does not parse as numbers is a header.
std::vector<std::vector<double>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
      if (!numeric) break;
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Index as_index(double v, const std::filesystem::path& path) {
  if (v < 0 || v != std::floor(v)) throw InvalidInput(path.string() + ": invalid index " + std::to_string(v));
  return static_cast<Index>(v);
}

/// Nodal values from (node-index, ..., value) rows.
std::vector<double> nodal_values(const std::filesystem::path& path, const Mesh& mesh) {
  const auto rows = read_rows(path);
  std::vector<double> values(static_cast<std::size_t>(mesh.num_nodes()), 0.0);
  std::vector<bool> seen(values.size(), false);
  for (const auto& row : rows) {
    if (row.size() < 2) throw InvalidInput(path.string() + ": rows need a node index and a value");
    const Index i = as_index(row.front(), path);
    if (i >= mesh.num_nodes()) throw InvalidInput(path.string() + ": node index " + std::to_string(i) + " out of range");
    if (seen[static_cast<std::size_t>(i)]) throw InvalidInput(path.string() + ": duplicate node " + std::to_string(i));
    seen[static_cast<std::size_t>(i)] = true;
    values[static_cast<std::size_t>(i)] = row.back();
  }
  if (rows.size() != values.size())
    throw InvalidInput(path.string() + ": " + std::to_string(rows.size()) + " rows for " +
                       std::to_string(values.size()) + " mesh nodes");
  return values;
}

}  // namespace

void write_mesh_csv(const std::filesystem::path& dir, const Mesh& mesh) {
  std::filesystem::create_directories(dir);
  auto nodes = open_out(dir / "nodes.csv");
  nodes << "index,x,y\n";
  for (Index i = 0; i < mesh.num_nodes(); ++i) nodes << i << ',' << mesh.node(i)[0] << ',' << mesh.node(i)[1] << '\n';
  auto elements = open_out(dir / "elements.csv");
  elements << (mesh.dimension() == 1 ? "index,v0,v1\n" : "index,v0,v1,v2\n");
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    elements << e;
    for (int k = 0; k < mesh.vertices_per_element(); ++k) elements << ',' << mesh.element(e)[k];
    elements << '\n';
  }
  auto boundary = open_out(dir / "boundary.csv");
  boundary << "node\n";
  for (Index i = 0; i < mesh.num_nodes(); ++i)
    if (mesh.is_boundary(i)) boundary << i << '\n';
}

Mesh read_mesh_csv(const std::filesystem::path& dir) {
  const auto node_rows = read_rows(dir / "nodes.csv");
  const auto element_rows = read_rows(dir / "elements.csv");
  const auto boundary_rows = read_rows(dir / "boundary.csv");
  if (element_rows.empty()) throw InvalidInput("mesh has no elements");
  const int dimension = element_rows.front().size() == 3 ? 1 : 2;

  std::vector<Point> nodes(node_rows.size());
  for (const auto& row : node_rows) {
    if (row.size() != 3) throw InvalidInput("nodes.csv rows need index,x,y");
    const Index i = as_index(row[0], dir / "nodes.csv");
    if (i >= static_cast<Index>(nodes.size())) throw InvalidInput("nodes.csv index out of range");
    nodes[static_cast<std::size_t>(i)] = {row[1], row[2]};
  }
  std::vector<Mesh::Element> elements(element_rows.size(), Mesh::Element{0, 0, 0});
  for (const auto& row : element_rows) {
    if (static_cast<int>(row.size()) != dimension + 2) throw InvalidInput("elements.csv rows have inconsistent length");
    const Index e = as_index(row[0], dir / "elements.csv");
    if (e >= static_cast<Index>(elements.size())) throw InvalidInput("elements.csv index out of range");
    for (int k = 0; k <= dimension; ++k)
      elements[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)] = as_index(row[static_cast<std::size_t>(k) + 1], dir / "elements.csv");
  }
  std::vector<bool> boundary(nodes.size(), false);
  for (const auto& row : boundary_rows) {
    const Index i = as_index(row.at(0), dir / "boundary.csv");
    if (i >= static_cast<Index>(nodes.size())) throw InvalidInput("boundary.csv index out of range");
    boundary[static_cast<std::size_t>(i)] = true;
  }
  return Mesh(dimension, std::move(nodes), std::move(elements), std::move(boundary));
}

void write_solution_csv(std::ostream& out, const DiscreteFunction& u) {
  const auto precision = out.precision(17);
  const Mesh& mesh = u.mesh();
  const bool planar = mesh.dimension() == 2;
  out << (planar ? "node_index,x,y,value\n" : "node_index,x,value\n");
  for (Index i = 0; i < mesh.num_nodes(); ++i) {
    out << i << ',' << mesh.node(i)[0];
    if (planar) out << ',' << mesh.node(i)[1];
    out << ',' << u.coefficient(i) << '\n';
  }
  out.precision(precision);
}

void write_solution_csv(const std::filesystem::path& path, const DiscreteFunction& u) {
  auto out = open_out(path);
  write_solution_csv(out, u);
}

DiscreteFunction read_function_csv(const std::filesystem::path& path, std::shared_ptr<const Mesh> mesh) {
  const auto values = nodal_values(path, *mesh);
  return DiscreteFunction(std::move(mesh), Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size())));
}

ExponentField read_field_table(const std::filesystem::path& path, std::shared_ptr<const Mesh> mesh) {
  auto values = nodal_values(path, *mesh);
  return ExponentField::table(std::move(mesh), std::move(values));
}

void write_vtk(const std::filesystem::path& path, const DiscreteFunction& u, const std::string& name) {
  auto out = open_out(path);
  const Mesh& mesh = u.mesh();
  const int nv = mesh.vertices_per_element();
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (Index i = 0; i < mesh.num_nodes(); ++i) out << mesh.node(i)[0] << ' ' << mesh.node(i)[1] << " 0\n";
  out << "CELLS " << mesh.num_elements() << ' ' << mesh.num_elements() * (nv + 1) << '\n';
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    out << nv;
    for (int k = 0; k < nv; ++k) out << ' ' << mesh.element(e)[k];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (Index e = 0; e < mesh.num_elements(); ++e) out << (nv == 2 ? 3 : 5) << '\n';
  out << "POINT_DATA " << mesh.num_nodes() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Index i = 0; i < mesh.num_nodes(); ++i) out << u.coefficient(i) << '\n';
}

}  // namespace dpkit
