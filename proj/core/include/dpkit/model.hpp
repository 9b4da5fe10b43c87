#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "dpkit/exponent_field.hpp"
#include "dpkit/function.hpp"
#include "dpkit/hypotheses.hpp"
#include "dpkit/quadrature.hpp"

namespace dpkit {

/// Exponents and weight at one point.
struct PhaseCoefficients {
  double p = 2.0;
  double q = 2.0;
  double mu = 0.0;
};

/// H(x, t) = t^p + mu t^q for t >= 0.
inline double phase(double t, const PhaseCoefficients& c) {
  if (t == 0.0) return 0.0;
  return std::pow(t, c.p) + (c.mu != 0.0 ? c.mu * std::pow(t, c.q) : 0.0);
}

/// The t >= 0 solving t^p + mu t^q = s (safeguarded Newton on log t).
double phase_inverse(double s, double p, double q, double mu);

/// A mesh together with p, q and mu sampled once at every quadrature point.
///
/// All integrals of the library evaluate the exponents at the quadrature points of this
/// model. Throws InvalidInput if p or q is not greater than one, mu is negative, or any
/// sample is not finite.
class DoublePhaseModel {
 public:
  DoublePhaseModel(std::shared_ptr<const Mesh> mesh, CoefficientFields fields, int quadrature_order = kDefaultQuadratureOrder);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  const Quadrature& quadrature() const { return quadrature_; }
  const CoefficientFields& fields() const { return fields_; }

  std::size_t points_per_element() const { return quadrature_.size(); }
  const PhaseCoefficients& coefficients(Index e, std::size_t k) const {
    return samples_[static_cast<std::size_t>(e) * quadrature_.size() + k];
  }
  /// Physical quadrature weight.
  double weight(Index e, std::size_t k) const { return mesh_->measure(e) * quadrature_.weight(k); }

  /// Bounds over nodes and quadrature points.
  const Bounds& p_bounds() const { return p_bounds_; }
  const Bounds& q_bounds() const { return q_bounds_; }
  double mu_max() const { return mu_max_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  CoefficientFields fields_;
  Quadrature quadrature_;
  std::vector<PhaseCoefficients> samples_;
  Bounds p_bounds_;
  Bounds q_bounds_;
  double mu_max_ = 0.0;
};

}  // namespace dpkit
