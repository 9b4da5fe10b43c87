#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "dpkit/mesh.hpp"
#include "dpkit/quadrature.hpp"

namespace dpkit {

/// Continuous piecewise-linear (P1) function: nodal coefficients plus the exact element-wise
/// constant gradient, computed eagerly at construction.
class DiscreteFunction {
 public:
  /// Throws InvalidInput if the coefficient count differs from the node count or a
  /// coefficient is not finite.
  DiscreteFunction(std::shared_ptr<const Mesh> mesh, Eigen::VectorXd coefficients);

  static DiscreteFunction zero(std::shared_ptr<const Mesh> mesh);
  /// Lifts free-dof values to a function that vanishes on the boundary.
  static DiscreteFunction from_free(std::shared_ptr<const Mesh> mesh, const Eigen::VectorXd& free_values);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }

  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  double coefficient(Index node) const { return coefficients_[node]; }
  const Vec2& gradient(Index e) const { return gradients_[static_cast<std::size_t>(e)]; }
  double value(Index e, const Barycentric& bary) const;

  Eigen::VectorXd free_values() const;
  bool vanishes_on_boundary() const;
  bool is_zero() const { return coefficients_.isZero(0.0); }

  DiscreteFunction operator+(const DiscreteFunction& other) const;
  DiscreteFunction operator-(const DiscreteFunction& other) const;
  DiscreteFunction scaled(double factor) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  Eigen::VectorXd coefficients_;
  std::vector<Vec2> gradients_;
};

/// Throws InvalidInput unless both functions live on the same mesh object.
void require_same_mesh(const DiscreteFunction& a, const DiscreteFunction& b);
void require_mesh(const DiscreteFunction& u, const Mesh& mesh);

/// Nodal interpolation. Throws InvalidInput on a non-finite nodal value.
DiscreteFunction interpolate(std::shared_ptr<const Mesh> mesh, const std::function<double(const Point&)>& f);

/// A quadrature point mapped to a physical element.
struct QuadraturePoint {
  Index element;
  std::size_t local;
  Point x;
  Barycentric bary;
  double weight;  ///< physical weight: element measure times normalised reference weight
};

/// Sum of weighted integrand evaluations over all elements. Throws NumericError naming the
/// element if an evaluation is not finite.
double integrate(const Mesh& mesh, const Quadrature& quadrature,
                 const std::function<double(const QuadraturePoint&)>& integrand);

}  // namespace dpkit
