#pragma once

#include <functional>
#include <optional>
#include <string>

#include "dpkit/exponent_field.hpp"

namespace dpkit {

/// Growth bound |f| <= a1 |xi|^{p(r-1)/r} + a2 |s|^{r-1} + alpha(x).
struct GrowthData {
  double a1 = 0.0;
  double a2 = 0.0;
  ExponentField alpha = ExponentField::constant(0.0);
  ExponentField r = ExponentField::constant(2.0);
};

/// Sign bound f s <= b1 |xi|^p + b2 |s|^{p-} + omega(x).
struct SignData {
  double b1 = 0.0;
  double b2 = 0.0;
  ExponentField omega = ExponentField::constant(0.0);
};

/// One-sided Lipschitz bound in s with constant c1, Lipschitz bound in xi with constant c2, and
/// f - rho linear in xi.
struct UniquenessData {
  double c1 = 0.0;
  double c2 = 0.0;
  ExponentField rho = ExponentField::constant(0.0);
};

/// Right-hand side f(x, u, grad u) with its declared growth constants.
struct ConvectionTerm {
  using Evaluator = std::function<double(const Point& x, double s, const Vec2& xi)>;

  Evaluator f;
  std::optional<GrowthData> growth;
  std::optional<SignData> sign;
  std::optional<UniquenessData> uniqueness;
  std::string label = "f";

  double operator()(const Point& x, double s, const Vec2& xi) const { return f(x, s, xi); }

  /// Throws InvalidInput for a missing evaluator or a negative declared constant.
  void validate() const;
};

/// f(x, s, xi) = g(x) with |g| <= bound. Sign data come from Young's inequality with b2 = 1/2
/// for the exponent p_minus.
ConvectionTerm source_term(std::function<double(const Point&)> g, double bound, double p_minus = 2.0,
                           std::string label = "source");

}  // namespace dpkit
