#pragma once

#include <cstddef>
#include <vector>

#include "dpkit/types.hpp"

namespace dpkit {

inline constexpr int kDefaultQuadratureOrder = 4;

/// Gauss-Legendre nodes and weights on [0, 1] (weights sum to 1).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int points);

/// Reference-element quadrature exact for polynomials of total degree <= order.
///
/// Points are stored in barycentric coordinates and weights are normalised to sum to one, so
/// the physical weight of point k on element e is measure(e) * weight(k). Triangles use a
/// collapsed (Duffy) tensor product of Gauss-Legendre rules, which keeps all weights positive.
class Quadrature {
 public:
  /// Throws InvalidInput unless dimension is 1 or 2 and 1 <= order <= 8.
  Quadrature(int dimension, int order = kDefaultQuadratureOrder);

  int dimension() const { return dimension_; }
  int order() const { return order_; }
  std::size_t size() const { return weights_.size(); }

  const Barycentric& point(std::size_t k) const { return points_[k]; }
  double weight(std::size_t k) const { return weights_[k]; }
  const std::vector<Barycentric>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int dimension_;
  int order_;
  std::vector<Barycentric> points_;
  std::vector<double> weights_;
};

}  // namespace dpkit
