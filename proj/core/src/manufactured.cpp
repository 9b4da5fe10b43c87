#include "dpkit/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "dpkit/errors.hpp"

namespace dpkit {
namespace {

constexpr double kPi = std::numbers::pi;

CoefficientFields constant_fields(double p, double q, double mu) {
  return {ExponentField::constant(p), ExponentField::constant(q), ExponentField::constant(mu)};
}

ManufacturedCase poisson_1d() {
  ManufacturedCase c;
  c.name = "poisson-1d";
  c.fields = constant_fields(2.0, 2.0, 1.0);
  c.f = source_term([](const Point& x) { return 2.0 * kPi * kPi * std::sin(kPi * x[0]); }, 2.0 * kPi * kPi, 2.0,
                    "2 pi^2 sin(pi x)");
  c.exact = [](const Point& x) { return std::sin(kPi * x[0]); };
  return c;
}

ManufacturedCase poisson_2d() {
  ManufacturedCase c;
  c.name = "poisson-2d";
  c.mesh_dimension = 2;
  c.fields = constant_fields(2.0, 2.0, 1.0);
  auto exact = [](const Point& x) { return std::sin(kPi * x[0]) * std::sin(kPi * x[1]); };
  c.f = source_term([exact](const Point& x) { return 4.0 * kPi * kPi * exact(x); }, 4.0 * kPi * kPi, 2.0,
                    "4 pi^2 sin(pi x) sin(pi y)");
  c.exact = exact;
  return c;
}

ManufacturedCase dp_1d() {
  ManufacturedCase c;
  c.name = "dp-1d";
  c.fields = constant_fields(2.0, 3.0, 1.0);
  c.f = source_term([](const Point&) { return 1.0; }, 1.0, 2.0, "1");
  return c;
}

}  // namespace

std::vector<std::string> manufactured_names() { return {"poisson-1d", "poisson-2d", "dp-1d", "convection-linear"}; }

ManufacturedCase convection_linear_case(double beta) {
  if (!std::isfinite(beta)) throw InvalidInput("beta must be finite");
  ManufacturedCase c;
  c.name = "convection-linear";
  c.fields = {ExponentField::constant(2.0), ExponentField::constant(3.0), ExponentField::affine({1.0, 0.0}, 0.0)};
  const double b = std::abs(beta);
  ConvectionTerm t;
  t.f = [beta](const Point&, double, const Vec2& xi) { return beta * xi[0] + 1.0; };
  t.growth = GrowthData{b, 0.0, ExponentField::constant(1.0), ExponentField::constant(2.0)};
  // beta xi s <= b1 |xi|^2 + beta^2 s^2 / (4 b1) and s <= s^2 / 2 + 1/2
  constexpr double b1 = 0.3;
  t.sign = SignData{b1, b * b / (4.0 * b1) + 0.5, ExponentField::constant(0.5)};
  t.uniqueness = UniquenessData{0.0, b, ExponentField::constant(1.0)};
  t.label = "beta u' + 1";
  c.f = std::move(t);
  return c;
}

ManufacturedCase manufactured_case(const std::string& name) {
  if (name == "poisson-1d") return poisson_1d();
  if (name == "poisson-2d") return poisson_2d();
  if (name == "dp-1d") return dp_1d();
  if (name == "convection-linear") return convection_linear_case(0.9);
  throw InvalidInput("unknown manufactured case '" + name + "'");
}

std::shared_ptr<const Mesh> case_mesh(const ManufacturedCase& c, Index n) {
  if (c.mesh_dimension == 2) return std::make_shared<const Mesh>(build_rect_mesh({0.0, 1.0}, {0.0, 1.0}, n, n));
  return std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, n));
}

}  // namespace dpkit
