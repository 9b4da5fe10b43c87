#include "dpkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpkit/errors.hpp"

namespace dpkit {

double phase_inverse(double s, double p, double q, double mu) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("phase inverse needs a finite s >= 0");
  if (s == 0.0) return 0.0;
  if (mu == 0.0 || q == p) return std::pow(s / (1.0 + (q == p ? mu : 0.0)), 1.0 / p);

  // g(y) = log(e^{py} + mu e^{qy}) - log s is increasing and convex-ish in y = log t.
  const double target = std::log(s);
  auto g = [&](double y) {
    const double a = p * y;
    const double b = std::log(mu) + q * y;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m)) - target;
  };
  auto dg = [&](double y) {
    const double a = p * y;
    const double b = std::log(mu) + q * y;
    const double m = std::max(a, b);
    const double ea = std::exp(a - m);
    const double eb = std::exp(b - m);
    return (p * ea + q * eb) / (ea + eb);
  };
  // y bracket from the single-phase inverses.
  double lo = std::min(target / p, (target - std::log(mu)) / q) - 1.0;
  double hi = std::max(target / p, (target - std::log1p(mu)) / std::max(p, q)) + 1.0;
  while (g(lo) > 0.0) lo -= 1.0;
  while (g(hi) < 0.0) hi += 1.0;
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double v = g(y);
    if (v == 0.0) break;
    (v < 0.0 ? lo : hi) = y;
    double next = y - v / dg(y);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-16 * std::max(1.0, std::abs(y))) {
      y = next;
      break;
    }
    y = next;
  }
  return std::exp(y);
}

DoublePhaseModel::DoublePhaseModel(std::shared_ptr<const Mesh> mesh, CoefficientFields fields, int quadrature_order)
    : mesh_(std::move(mesh)), fields_(std::move(fields)), quadrature_(mesh_ ? mesh_->dimension() : 1, quadrature_order) {
  if (!mesh_ || mesh_->empty()) throw InvalidInput("model needs a non-empty mesh");

  const std::size_t nq = quadrature_.size();
  samples_.resize(static_cast<std::size_t>(mesh_->num_elements()) * nq);
  auto validate = [](const PhaseCoefficients& c, const Point& x) {
    if (std::isfinite(c.p) && std::isfinite(c.q) && std::isfinite(c.mu) && c.p > 1.0 && c.q > 1.0 && c.mu >= 0.0)
      return;
    std::ostringstream msg;
    msg << "coefficients p=" << c.p << ", q=" << c.q << ", mu=" << c.mu << " at (" << x[0] << ", " << x[1]
        << ") violate p > 1, q > 1, mu >= 0";
    throw InvalidInput(msg.str());
  };

  p_bounds_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  q_bounds_ = p_bounds_;
  auto record = [&](const PhaseCoefficients& c) {
    p_bounds_.minus = std::min(p_bounds_.minus, c.p);
    p_bounds_.plus = std::max(p_bounds_.plus, c.p);
    q_bounds_.minus = std::min(q_bounds_.minus, c.q);
    q_bounds_.plus = std::max(q_bounds_.plus, c.q);
    mu_max_ = std::max(mu_max_, c.mu);
  };

  for (Index e = 0; e < mesh_->num_elements(); ++e) {
    for (std::size_t k = 0; k < nq; ++k) {
      const auto& bary = quadrature_.point(k);
      const Point x = mesh_->map(e, bary);
      PhaseCoefficients c{fields_.p.at(*mesh_, e, bary, x), fields_.q.at(*mesh_, e, bary, x),
                          fields_.mu.at(*mesh_, e, bary, x)};
      validate(c, x);
      record(c);
      samples_[static_cast<std::size_t>(e) * nq + k] = c;
    }
  }
  for (Index i = 0; i < mesh_->num_nodes(); ++i) {
    PhaseCoefficients c{fields_.p.at_node(*mesh_, i), fields_.q.at_node(*mesh_, i), fields_.mu.at_node(*mesh_, i)};
    validate(c, mesh_->node(i));
    record(c);
  }
}

}  // namespace dpkit
