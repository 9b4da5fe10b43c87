#include "dpkit/convection.hpp"

#include <cmath>

#include "dpkit/errors.hpp"

namespace dpkit {

void ConvectionTerm::validate() const {
  if (!f) throw InvalidInput("convection term has no evaluator");
  auto nonnegative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput(std::string("declared constant ") + name + " must be >= 0");
  };
  if (growth) {
    nonnegative(growth->a1, "a1");
    nonnegative(growth->a2, "a2");
  }
  if (sign) {
    nonnegative(sign->b1, "b1");
    nonnegative(sign->b2, "b2");
  }
  if (uniqueness) {
    nonnegative(uniqueness->c1, "c1");
    nonnegative(uniqueness->c2, "c2");
  }
}

ConvectionTerm source_term(std::function<double(const Point&)> g, double bound, double p_minus, std::string label) {
  if (!g) throw InvalidInput("source term needs a callable");
  if (!(p_minus > 1.0)) throw InvalidInput("source term needs p_minus > 1");
  ConvectionTerm t;
  t.f = [g](const Point& x, double, const Vec2&) { return g(x); };
  t.growth = GrowthData{0.0, 0.0, ExponentField::constant(bound), ExponentField::constant(2.0)};
  // |g s| <= (d|s|)^p / p + (|g|/d)^{p'} / p' with d^p / p = 1/2
  const double d = std::pow(0.5 * p_minus, 1.0 / p_minus);
  const double conj = p_minus / (p_minus - 1.0);
  t.sign = SignData{0.0, 0.5, ExponentField::constant(std::pow(bound / d, conj) / conj)};
  t.uniqueness = UniquenessData{0.0, 0.0, ExponentField::callback(g, label)};
  t.label = std::move(label);
  return t;
}

}  // namespace dpkit
