#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpkit/mesh.hpp"
#include "dpkit/quadrature.hpp"

namespace dpkit {

/// Scalar coefficient field over the domain: an exponent p or q, or the weight mu.
///
/// Constant, affine and callback fields can be evaluated anywhere. Tabulated fields hold nodal
/// values on a mesh and are interpolated linearly inside elements.
class ExponentField {
 public:
  enum class Kind { constant, affine, table, callback };

  static ExponentField constant(double value);
  /// x -> slope . x + offset
  static ExponentField affine(Vec2 slope, double offset);
  static ExponentField table(std::shared_ptr<const Mesh> mesh, std::vector<double> nodal_values);
  static ExponentField callback(std::function<double(const Point&)> f, std::string label = "callback");

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  bool is_constant() const { return kind_ == Kind::constant; }

  /// Value at an arbitrary point. Tables throw DomainError outside their mesh.
  double at(const Point& x) const;
  /// Value at a point known to lie in `element` of `mesh` (fast path for tables on that mesh).
  double at(const Mesh& mesh, Index element, const Barycentric& bary, const Point& x) const;
  double at_node(const Mesh& mesh, Index node) const;

  const std::optional<Bounds>& cached_bounds() const { return bounds_; }
  void cache_bounds(const Bounds& bounds) { bounds_ = bounds; }

 private:
  ExponentField() = default;

  Kind kind_ = Kind::constant;
  std::string label_;
  double value_ = 0.0;
  Vec2 slope_{0.0, 0.0};
  std::shared_ptr<const Mesh> table_mesh_;
  std::vector<double> table_;
  std::function<double(const Point&)> callback_;
  std::optional<Bounds> bounds_;
};

/// A point at which fields are sampled: either a mesh node or a quadrature point.
struct SamplePoint {
  Point x;
  Index element = -1;  ///< owning element for quadrature samples
  Barycentric bary{0.0, 0.0, 0.0};
  Index node = -1;  ///< node index for nodal samples
};

/// All mesh nodes followed by all quadrature points of every element.
class SampleSet {
 public:
  SampleSet(std::shared_ptr<const Mesh> mesh, const Quadrature& quadrature);
  /// Nodes only.
  explicit SampleSet(std::shared_ptr<const Mesh> mesh);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  std::span<const SamplePoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  double evaluate(const ExponentField& field, std::size_t k) const;
  std::vector<double> evaluate(const ExponentField& field) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<SamplePoint> points_;
};

/// Exact min/max of the field over all nodes and quadrature points of the mesh (default
/// order); the result is also cached on the field. Throws InvalidInput for an empty mesh.
Bounds field_bounds(ExponentField& field, std::shared_ptr<const Mesh> mesh, int quadrature_order = kDefaultQuadratureOrder);

/// Min/max of already sampled values (no caching).
Bounds sample_bounds(std::span<const double> values);

}  // namespace dpkit
