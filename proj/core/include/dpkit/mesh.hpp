#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dpkit/types.hpp"

namespace dpkit {

/// Conforming simplicial mesh of an interval (dimension 1) or a polygon (dimension 2).
///
/// Elements store up to three vertex indices; intervals use the first two. The mesh is
/// immutable after construction and precomputes element measures, the constant gradients
/// of the P1 basis functions on every element, and the numbering of free (interior) nodes.
class Mesh {
 public:
  using Element = std::array<Index, 3>;

  Mesh() = default;

  /// Throws InvalidInput for degenerate elements, out-of-range vertex indices, or a boundary
  /// flag vector whose length differs from the node count.
  Mesh(int dimension, std::vector<Point> nodes, std::vector<Element> elements, std::vector<bool> boundary);

  int dimension() const { return dimension_; }
  /// Vertices per element: 2 for intervals, 3 for triangles.
  int vertices_per_element() const { return dimension_ + 1; }

  Index num_nodes() const { return static_cast<Index>(nodes_.size()); }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }
  bool empty() const { return nodes_.empty() || elements_.empty(); }

  const Point& node(Index i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::span<const Point> nodes() const { return nodes_; }
  const Element& element(Index e) const { return elements_[static_cast<std::size_t>(e)]; }
  std::span<const Element> elements() const { return elements_; }

  bool is_boundary(Index node) const { return boundary_[static_cast<std::size_t>(node)]; }
  Index num_boundary_nodes() const;

  double measure(Index e) const { return measures_[static_cast<std::size_t>(e)]; }
  double total_measure() const;

  /// Gradient of the local basis function attached to vertex `local` of element `e`.
  const Vec2& basis_gradient(Index e, int local) const {
    return basis_gradients_[static_cast<std::size_t>(e)][static_cast<std::size_t>(local)];
  }

  /// Maps barycentric coordinates on element e to physical coordinates.
  Point map(Index e, const Barycentric& bary) const;

  /// Interior nodes in increasing order; the position in this list is the free-dof index.
  std::span<const Index> free_nodes() const { return free_nodes_; }
  Index num_free() const { return static_cast<Index>(free_nodes_.size()); }
  /// Free-dof index of a node, or -1 for boundary nodes.
  Index free_index(Index node) const { return free_index_[static_cast<std::size_t>(node)]; }

  /// Unique undirected element edges (node pairs with first < second).
  std::vector<std::pair<Index, Index>> edges() const;

  /// Element containing x together with its barycentric coordinates (brute-force search).
  std::optional<std::pair<Index, Barycentric>> locate(const Point& x, double tol = 1e-12) const;

 private:
  int dimension_ = 1;
  std::vector<Point> nodes_;
  std::vector<Element> elements_;
  std::vector<bool> boundary_;
  std::vector<double> measures_;
  std::vector<std::array<Vec2, 3>> basis_gradients_;
  std::vector<Index> free_nodes_;
  std::vector<Index> free_index_;
};

/// Uniform partition of [a, b] into n elements; both endpoints are boundary nodes.
Mesh build_interval_mesh(double a, double b, Index n);

/// Structured triangulation of [x0, x1] x [y0, y1]: nx * ny cells, two triangles per cell.
Mesh build_rect_mesh(std::array<double, 2> x_range, std::array<double, 2> y_range, Index nx, Index ny);

}  // namespace dpkit
