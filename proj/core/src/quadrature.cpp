#include "dpkit/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "dpkit/errors.hpp"

namespace dpkit {

namespace {

// Returns (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule gauss_legendre(int points) {
  if (points < 1) throw InvalidInput("Gauss-Legendre rule needs at least one point");
  const auto n = static_cast<std::size_t>(points);
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

Quadrature::Quadrature(int dimension, int order) : dimension_(dimension), order_(order) {
  if (dimension != 1 && dimension != 2) throw InvalidInput("quadrature dimension must be 1 or 2");
  if (order < 1 || order > 8) throw InvalidInput("quadrature order must lie in [1, 8]");

  if (dimension == 1) {
    const auto rule = gauss_legendre((order + 2) / 2);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      points_.push_back({1.0 - t, t, 0.0});
      weights_.push_back(rule.weights[i]);
    }
    return;
  }

  // x = u (1 - v), y = v with Jacobian (1 - v): degree <= order in u, <= order + 1 in v.
  const auto ru = gauss_legendre((order + 2) / 2);
  const auto rv = gauss_legendre((order + 3) / 2);
  for (std::size_t j = 0; j < rv.nodes.size(); ++j) {
    const double v = rv.nodes[j];
    for (std::size_t i = 0; i < ru.nodes.size(); ++i) {
      const double u = ru.nodes[i];
      const double x = u * (1.0 - v);
      const double y = v;
      points_.push_back({1.0 - x - y, x, y});
      weights_.push_back(2.0 * ru.weights[i] * rv.weights[j] * (1.0 - v));
    }
  }
}

}  // namespace dpkit
