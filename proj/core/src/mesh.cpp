#include "dpkit/mesh.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "dpkit/errors.hpp"

namespace dpkit {

Mesh::Mesh(int dimension, std::vector<Point> nodes, std::vector<Element> elements, std::vector<bool> boundary)
    : dimension_(dimension), nodes_(std::move(nodes)), elements_(std::move(elements)), boundary_(std::move(boundary)) {
  if (dimension_ != 1 && dimension_ != 2) throw InvalidInput("mesh dimension must be 1 or 2");
  if (boundary_.size() != nodes_.size()) throw InvalidInput("boundary flags must match the node count");
  for (const auto& x : nodes_)
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) throw InvalidInput("mesh node coordinates must be finite");

  const int nv = vertices_per_element();
  measures_.resize(elements_.size());
  basis_gradients_.resize(elements_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const auto& el = elements_[e];
    for (int k = 0; k < nv; ++k)
      if (el[k] < 0 || el[k] >= num_nodes())
        throw InvalidInput("element " + std::to_string(e) + " references a missing node");

    if (dimension_ == 1) {
      const double x0 = nodes_[el[0]][0];
      const double x1 = nodes_[el[1]][0];
      const double h = x1 - x0;
      if (!(std::abs(h) > 0.0)) throw InvalidInput("element " + std::to_string(e) + " has zero length");
      measures_[e] = std::abs(h);
      basis_gradients_[e] = {Vec2{-1.0 / h, 0.0}, Vec2{1.0 / h, 0.0}, Vec2{0.0, 0.0}};
    } else {
      const Point& a = nodes_[el[0]];
      const Point& b = nodes_[el[1]];
      const Point& c = nodes_[el[2]];
      const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
      if (!(std::abs(det) > 0.0)) throw InvalidInput("element " + std::to_string(e) + " is degenerate");
      measures_[e] = 0.5 * std::abs(det);
      // grad(lambda_i) = rot90(opposite edge) / det
      basis_gradients_[e] = {Vec2{(b[1] - c[1]) / det, (c[0] - b[0]) / det},
                             Vec2{(c[1] - a[1]) / det, (a[0] - c[0]) / det},
                             Vec2{(a[1] - b[1]) / det, (b[0] - a[0]) / det}};
    }
  }

  free_index_.assign(nodes_.size(), -1);
  for (Index i = 0; i < num_nodes(); ++i) {
    if (!boundary_[static_cast<std::size_t>(i)]) {
      free_index_[static_cast<std::size_t>(i)] = static_cast<Index>(free_nodes_.size());
      free_nodes_.push_back(i);
    }
  }
}

Index Mesh::num_boundary_nodes() const {
  return static_cast<Index>(std::count(boundary_.begin(), boundary_.end(), true));
}

double Mesh::total_measure() const { return std::accumulate(measures_.begin(), measures_.end(), 0.0); }

Point Mesh::map(Index e, const Barycentric& bary) const {
  const auto& el = element(e);
  Point x{0.0, 0.0};
  for (int k = 0; k < vertices_per_element(); ++k) x = x + bary[static_cast<std::size_t>(k)] * node(el[k]);
  return x;
}

std::vector<std::pair<Index, Index>> Mesh::edges() const {
  std::vector<std::pair<Index, Index>> out;
  const int nv = vertices_per_element();
  for (const auto& el : elements_)
    for (int i = 0; i < nv; ++i)
      for (int j = i + 1; j < nv; ++j) out.emplace_back(std::min(el[i], el[j]), std::max(el[i], el[j]));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::pair<Index, Barycentric>> Mesh::locate(const Point& x, double tol) const {
  for (Index e = 0; e < num_elements(); ++e) {
    const auto& el = element(e);
    Barycentric bary{0.0, 0.0, 0.0};
    if (dimension_ == 1) {
      const double x0 = node(el[0])[0];
      const double x1 = node(el[1])[0];
      const double t = (x[0] - x0) / (x1 - x0);
      bary = {1.0 - t, t, 0.0};
    } else {
      // lambda_i(x) = lambda_i(a) + grad(lambda_i) . (x - a) with lambda(a) = (1, 0, 0)
      const Vec2 d = x - node(el[0]);
      const auto& g = basis_gradients_[static_cast<std::size_t>(e)];
      bary = {1.0 + dot(g[0], d), dot(g[1], d), dot(g[2], d)};
    }
    bool inside = true;
    for (int k = 0; k < vertices_per_element(); ++k) inside = inside && bary[static_cast<std::size_t>(k)] >= -tol;
    if (inside) return std::make_pair(e, bary);
  }
  return std::nullopt;
}

Mesh build_interval_mesh(double a, double b, Index n) {
  if (!(a < b)) throw InvalidInput("interval mesh requires a < b");
  if (n < 1) throw InvalidInput("interval mesh requires at least one element");
  std::vector<Point> nodes(static_cast<std::size_t>(n + 1));
  std::vector<bool> boundary(nodes.size(), false);
  for (Index i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    nodes[static_cast<std::size_t>(i)] = {i == n ? b : a + (b - a) * t, 0.0};
  }
  boundary.front() = true;
  boundary.back() = true;
  std::vector<Mesh::Element> elements(static_cast<std::size_t>(n));
  for (Index e = 0; e < n; ++e) elements[static_cast<std::size_t>(e)] = {e, e + 1, 0};
  return Mesh(1, std::move(nodes), std::move(elements), std::move(boundary));
}

Mesh build_rect_mesh(std::array<double, 2> x_range, std::array<double, 2> y_range, Index nx, Index ny) {
  if (nx < 1 || ny < 1) throw InvalidInput("rectangle mesh requires positive cell counts");
  if (!(x_range[0] < x_range[1]) || !(y_range[0] < y_range[1]))
    throw InvalidInput("rectangle mesh requires non-empty coordinate ranges");

  const Index cols = nx + 1;
  auto id = [cols](Index i, Index j) { return j * cols + i; };
  std::vector<Point> nodes;
  std::vector<bool> boundary;
  nodes.reserve(static_cast<std::size_t>(cols * (ny + 1)));
  for (Index j = 0; j <= ny; ++j) {
    const double y = j == ny ? y_range[1]
                             : y_range[0] + (y_range[1] - y_range[0]) * static_cast<double>(j) / static_cast<double>(ny);
    for (Index i = 0; i <= nx; ++i) {
      const double x = i == nx ? x_range[1]
                               : x_range[0] + (x_range[1] - x_range[0]) * static_cast<double>(i) / static_cast<double>(nx);
      nodes.push_back({x, y});
      boundary.push_back(i == 0 || j == 0 || i == nx || j == ny);
    }
  }
  std::vector<Mesh::Element> elements;
  elements.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(2, std::move(nodes), std::move(elements), std::move(boundary));
}

}  // namespace dpkit
