#include "catalogue.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "dpkit/eigensolver.hpp"
#include "dpkit/manufactured.hpp"
#include "dpkit/modular.hpp"
#include "dpkit/operator.hpp"
#include "dpkit/solver.hpp"

namespace dpkit::cli {
namespace {

using std::numbers::pi;
using Rng = std::mt19937_64;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<const Mesh> interval(Index n, double b = 1.0) {
  return std::make_shared<const Mesh>(build_interval_mesh(0.0, b, n));
}

std::shared_ptr<const Mesh> square(Index n, double side = 1.0) {
  return std::make_shared<const Mesh>(build_rect_mesh({0.0, side}, {0.0, side}, n, n));
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// lo + (hi - lo) (1 + sin(kx x + ky y + phase)) / 2
ExponentField wave(Rng& rng, double lo, double hi) {
  const double kx = uniform(rng, 0.5, 6.0), ky = uniform(rng, 0.5, 6.0), phase = uniform(rng, 0.0, 2.0 * pi);
  return ExponentField::callback(
      [=](const Point& x) { return lo + (hi - lo) * 0.5 * (1.0 + std::sin(kx * x[0] + ky * x[1] + phase)); }, "wave");
}

CoefficientFields constants(double p, double q, double mu) {
  return {ExponentField::constant(p), ExponentField::constant(q), ExponentField::constant(mu)};
}

/// Five exponent/weight configurations covering constant, affine and oscillating data.
std::vector<CoefficientFields> configurations() {
  return {
      constants(2.0, 2.0, 0.0),
      constants(1.5, 3.0, 1.0),
      {ExponentField::affine({0.5, 0.0}, 1.3), ExponentField::affine({0.5, 0.0}, 2.3), ExponentField::affine({1.0, 0.0}, 0.0)},
      constants(3.0, 4.0, 0.5),
      {ExponentField::callback([](const Point& x) { return 1.8 + 0.2 * std::sin(2.0 * pi * x[0]); }),
       ExponentField::constant(2.6),
       ExponentField::callback([](const Point& x) { return (x[0] - 0.5) * (x[0] - 0.5) + x[1] * x[1]; })},
  };
}

/// Random free values with a random overall scale so that norms land on both sides of 1.
DiscreteFunction random_function(const std::shared_ptr<const Mesh>& mesh, Rng& rng) {
  Eigen::VectorXd free(mesh->num_free());
  for (Index i = 0; i < free.size(); ++i) free[i] = uniform(rng, -1.0, 1.0);
  if (free.isZero(0.0)) free[0] = 1.0;
  return DiscreteFunction::from_free(mesh, free * std::pow(10.0, uniform(rng, -1.5, 1.5)));
}

DiscreteFunction random_direction(const std::shared_ptr<const Mesh>& mesh, Rng& rng) {
  Eigen::VectorXd free(mesh->num_free());
  for (Index i = 0; i < free.size(); ++i) free[i] = uniform(rng, -1.0, 1.0);
  return DiscreteFunction::from_free(mesh, free);
}

std::string describe(const std::string& what, double bound) {
  std::ostringstream s;
  s << what << " (bound " << bound << ")";
  return s.str();
}

struct Catalogue {
  std::uint64_t seed;
  std::vector<PropertyResult> results;

  Rng rng(std::uint64_t stream) const { return Rng(seed * 0x9E3779B97F4A7C15ULL + stream); }

  void add(std::string module, std::string name, bool passed, double value, std::string detail) {
    results.push_back({std::move(module), std::move(name), passed, value, std::move(detail)});
  }

  /// Runs `body`, recording an exception as a failure of the property.
  void run(const std::string& module, const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(module, name, false, std::numeric_limits<double>::quiet_NaN(), std::string("raised: ") + e.what());
    }
  }
};

// exponent fields

void field_bounds_consistency(Catalogue& cat) {
  auto rng = cat.rng(1);
  double worst = kInf;
  for (int k = 0; k < 6; ++k) {
    auto mesh = k % 2 == 0 ? interval(32) : square(8);
    ExponentField field = k < 2   ? wave(rng, 1.2, 3.5)
                          : k < 4 ? ExponentField::affine({uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}, 2.0)
                                  : ExponentField::table(mesh, [&] {
                                      std::vector<double> v(static_cast<std::size_t>(mesh->num_nodes()));
                                      for (double& x : v) x = uniform(rng, 1.1, 4.0);
                                      return v;
                                    }());
    const Bounds b = field_bounds(field, mesh);
    const SampleSet samples(mesh, Quadrature(mesh->dimension(), kDefaultQuadratureOrder));
    for (double v : samples.evaluate(field)) worst = std::min({worst, v - b.minus, b.plus - v});
    if (field.kind() != ExponentField::Kind::callback) {
      // piecewise-linear fields take their extremes at nodes
      for (int j = 0; j < 200; ++j) {
        const Point x{uniform(rng, 0.0, 1.0), mesh->dimension() == 2 ? uniform(rng, 0.0, 1.0) : 0.0};
        const double v = field.at(x);
        worst = std::min({worst, v - b.minus, b.plus - v});
      }
    }
  }
  cat.add("exponent_fields", "field bounds enclose point queries", worst >= -1e-14, worst,
          describe("min distance of a query inside [min, max]", -1e-14));
}

CoefficientFields random_triple(Rng& rng) {
  CoefficientFields f;
  const double kx = uniform(rng, 0.5, 4.0), phase = uniform(rng, 0.0, 2.0 * pi);
  const double p0 = uniform(rng, 1.4, 2.0), pa = uniform(rng, 0.0, 0.3);
  const double d0 = uniform(rng, 0.02, 0.45), da = uniform(rng, 0.0, 0.05);
  const double m0 = uniform(rng, 0.0, 2.0), mk = uniform(rng, 0.5, 5.0);
  auto p = [=](const Point& x) { return p0 + pa * std::sin(kx * x[0] + phase); };
  f.p = ExponentField::callback(p, "p");
  f.q = ExponentField::callback([=](const Point& x) { return p(x) * (1.0 + d0 + da * std::cos(kx * x[0])); }, "q");
  f.mu = ExponentField::callback([=](const Point& x) { return m0 * std::pow(std::sin(mk * x[0] + phase), 2); }, "mu");
  return f;
}

void a1_implication(Catalogue& cat) {
  auto rng = cat.rng(2);
  auto mesh = interval(16);
  const SampleSet samples(mesh);
  int sufficient = 0, violations = 0;
  double worst = kInf;
  for (int k = 0; k < 20; ++k) {
    const auto fields = random_triple(rng);
    if (!check_A1_sufficient(fields, samples, 3, 1.0).passed()) continue;
    ++sufficient;
    const double beta = check_A1_characterization(fields, samples, 3, 2000, cat.seed + k).beta_max;
    worst = std::min(worst, beta);
    if (!(beta > 0.0)) ++violations;
  }
  cat.add("exponent_fields", "A1 sufficient implies characterization", violations == 0, worst,
          "min beta_max over " + std::to_string(sufficient) + " sufficient triples (must be > 0)");
}

void holder_monotone(Catalogue& cat) {
  auto rng = cat.rng(3);
  double worst = kInf;
  for (int k = 0; k < 6; ++k) {
    // diameters stay below 1 so that |x - y|^alpha decreases in alpha
    auto mesh = k % 2 == 0 ? interval(24) : square(6, 0.7);
    const SampleSet samples(mesh);
    const ExponentField field = wave(rng, 1.2, 3.0);
    double previous = 0.0;
    for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
      const double h = estimate_holder(field, samples, alpha);
      worst = std::min(worst, h - previous * (1.0 - 1e-12));
      previous = h;
    }
  }
  cat.add("exponent_fields", "holder estimate nondecreasing in alpha", worst >= 0.0, worst,
          describe("min increment between consecutive alpha", 0.0));
}

void critical_exponent_above_q(Catalogue& cat) {
  auto rng = cat.rng(4);
  int passing = 0;
  double worst = kInf;
  for (int k = 0; k < 20; ++k) {
    auto mesh = k % 2 == 0 ? interval(16) : square(4);
    const SampleSet samples(mesh);
    CoefficientFields f{wave(rng, 1.2, 2.4), wave(rng, 2.5, 4.5), wave(rng, 0.0, 1.0)};
    if (!check_condition_H(f, samples, 3).passed()) continue;
    ++passing;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Point& x = samples.points()[i].x;
      worst = std::min(worst, critical_exponent(f.p, x, 3) - f.q.at(x));
    }
  }
  cat.add("exponent_fields", "critical exponent exceeds q where H holds", passing > 0 && worst > 0.0, worst,
          "min p* - q over " + std::to_string(passing) + " passing configurations (must be > 0)");
}

// Musielak-Orlicz spaces

void norm_modular_relations(Catalogue& cat) {
  auto rng = cat.rng(5);
  double unit_ball = 0.0, slack = kInf;
  bool signs = true;
  for (const auto& fields : configurations()) {
    for (auto mesh : {interval(64), square(8)}) {
      const DoublePhaseModel model(mesh, fields);
      for (int k = 0; k < 8; ++k) {
        const auto u = random_function(mesh, rng);
        for (ModularKind kind : {ModularKind::values, ModularKind::combined}) {
          const auto rel = check_norm_modular(model, u, kind, 1e-10);
          unit_ball = std::max(unit_ball, rel.unit_ball_residual);
          slack = std::min({slack, rel.lower_slack, rel.upper_slack});
          signs = signs && rel.sign_consistent;
        }
      }
    }
  }
  cat.add("musielak_space", "unit ball", unit_ball <= 1e-10, unit_ball,
          describe("max |rho(u/||u||) - 1|", 1e-10));
  cat.add("musielak_space", "sign equivalence", signs, signs ? 1.0 : 0.0, "rho < 1 iff ||u|| < 1 and rho > 1 iff ||u|| > 1");
  cat.add("musielak_space", "norm-modular sandwich", slack >= -1e-12, slack, describe("min sandwich slack", -1e-12));
}

void homogeneity(Catalogue& cat) {
  auto rng = cat.rng(6);
  auto mesh = interval(64);
  const Quadrature quadrature(1, kDefaultQuadratureOrder);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const DoublePhaseModel model(mesh, constants(p, p + 1.0, 0.0));
    for (int k = 0; k < 5; ++k) {
      const auto u = random_function(mesh, rng);
      const double classical = std::pow(integrate(*mesh, quadrature, [&](const QuadraturePoint& x) {
                                          return std::pow(std::abs(u.value(x.element, x.bary)), p);
                                        }),
                                        1.0 / p);
      const double norm = luxemburg_norm(model, u).norm;
      worst = std::max(worst, std::abs(norm - classical) / classical);
    }
  }
  cat.add("musielak_space", "constant-exponent norm is the Lebesgue norm", worst <= 1e-10, worst,
          describe("max relative deviation", 1e-10));
}

void seminorm_below_norm(Catalogue& cat) {
  auto rng = cat.rng(7);
  double worst = -kInf;
  for (const auto& fields : configurations()) {
    auto mesh = interval(32);
    const DoublePhaseModel model(mesh, fields);
    for (int k = 0; k < 5; ++k) {
      const auto u = random_function(mesh, rng);
      const double norm = luxemburg_norm(model, u).norm;
      worst = std::max(worst, (seminorm_mu(model, u).norm - norm) / norm);
    }
  }
  cat.add("musielak_space", "mu-seminorm bounded by the norm", worst <= 1e-12, worst,
          describe("max (seminorm - norm) / norm", 1e-12));
}

void reverse_holder(Catalogue& cat) {
  auto rng = cat.rng(8);
  double worst = kInf;
  bool passed = true;
  for (int k = 0; k < 200; ++k) {
    const std::size_t pieces = 1 + static_cast<std::size_t>(uniform(rng, 0.0, 12.0));
    std::vector<double> f(pieces), g(pieces), r(pieces), w(pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
      f[i] = std::pow(10.0, uniform(rng, -2.0, 2.0));
      g[i] = std::pow(10.0, uniform(rng, -2.0, 2.0));
      r[i] = uniform(rng, 1.5, 3.0);
      w[i] = uniform(rng, 0.01, 1.0);
    }
    const auto res = reverse_holder_check(f, g, r, w);
    passed = passed && res.passed;
    worst = std::min(worst, res.lhs - res.rhs);
  }
  cat.add("musielak_space", "reverse holder inequality", passed && worst >= -1e-12, worst,
          describe("min lhs - rhs", -1e-12));
}

/// Modular with the nodes as quadrature points (lumped weights).
double nodal_modular(const Mesh& mesh, const CoefficientFields& fields, const DiscreteFunction& u) {
  std::vector<double> weight(static_cast<std::size_t>(mesh.num_nodes()), 0.0);
  for (Index e = 0; e < mesh.num_elements(); ++e)
    for (int l = 0; l < mesh.vertices_per_element(); ++l)
      weight[static_cast<std::size_t>(mesh.element(e)[static_cast<std::size_t>(l)])] +=
          mesh.measure(e) / mesh.vertices_per_element();
  double total = 0.0;
  for (Index i = 0; i < mesh.num_nodes(); ++i) {
    const Point& x = mesh.node(i);
    total += weight[static_cast<std::size_t>(i)] *
             phase(std::abs(u.coefficient(i)), {fields.p.at(x), fields.q.at(x), fields.mu.at(x)});
  }
  return total;
}

void truncation(Catalogue& cat) {
  auto rng = cat.rng(9);
  double worst = kInf;
  bool exact = true;
  for (const auto& fields : configurations()) {
    for (auto mesh : {interval(32), square(6)}) {
      for (int k = 0; k < 4; ++k) {
        const auto u = random_function(mesh, rng);
        const auto plus = truncate(u, TruncationSign::plus), minus = truncate(u, TruncationSign::minus);
        const double rho = nodal_modular(*mesh, fields, u);
        worst = std::min({worst, rho - nodal_modular(*mesh, fields, plus), rho - nodal_modular(*mesh, fields, minus)});
        exact = exact && ((plus - minus).coefficients().array() == u.coefficients().array()).all();
      }
    }
  }
  cat.add("musielak_space", "truncation decreases the modular", worst >= 0.0 && exact, worst,
          "min rho(u) - rho(u+/-) at the nodes (must be >= 0); u+ - u- == u exactly");
}

void uniform_convexity(Catalogue& cat) {
  auto rng = cat.rng(10);
  double worst = kInf;
  bool passed = true;
  for (int k = 0; k < 2000; ++k) {
    const PhaseCoefficients c{uniform(rng, 1.1, 4.0), 0.0, uniform(rng, 0.0, 2.0)};
    const PhaseCoefficients cq{c.p, c.p + uniform(rng, 0.0, 2.0), c.mu};
    const double t = std::pow(10.0, uniform(rng, -2.0, 2.0)), s = std::pow(10.0, uniform(rng, -2.0, 2.0));
    const auto probe = uniform_convexity_probe(cq, t, s, 0.05);
    passed = passed && probe.passed;
    if (!probe.near_branch) worst = std::min(worst, probe.delta);
  }
  cat.add("musielak_space", "uniform convexity away from the diagonal", passed && worst > 0.0, worst,
          "min convexity defect over pairs with |t - s| > eps max(t, s) (must be > 0)");
}

// discretization

void partition_of_unity(Catalogue& cat) {
  double worst = 0.0;
  for (auto mesh : {interval(17), square(7)}) {
    const auto one = interpolate(mesh, [](const Point&) { return 1.0; });
    for (int order = 1; order <= 8; ++order) {
      const Quadrature q(mesh->dimension(), order);
      for (Index e = 0; e < mesh->num_elements(); ++e)
        for (std::size_t k = 0; k < q.size(); ++k) worst = std::max(worst, std::abs(one.value(e, q.point(k)) - 1.0));
    }
  }
  cat.add("discretization", "partition of unity", worst <= 1e-14, worst, describe("max |sum of basis - 1|", 1e-14));
}

void gradient_consistency(Catalogue& cat) {
  double worst = 0.0;
  for (auto mesh : {std::make_shared<const Mesh>(build_interval_mesh(-1.0, 2.0, 13)),
                    std::make_shared<const Mesh>(build_rect_mesh({0.0, 2.0}, {-0.5, 1.0}, 9, 5))}) {
    const auto u = interpolate(mesh, [](const Point& x) { return x[0]; });
    const double integral = integrate(*mesh, Quadrature(mesh->dimension(), 2), [&](const QuadraturePoint& p) {
      const Vec2& g = u.gradient(p.element);
      return g[0] * g[0] + g[1] * g[1];
    });
    worst = std::max(worst, std::abs(integral - mesh->total_measure()) / mesh->total_measure());
  }
  cat.add("discretization", "gradient of the coordinate integrates to the area", worst <= 1e-13, worst,
          describe("max relative deviation", 1e-13));
}

void refinement(Catalogue& cat) {
  const CoefficientFields fields{ExponentField::affine({0.5, 0.0}, 1.5), ExponentField::constant(3.0),
                                 ExponentField::constant(1.0)};
  auto exact = [](const Point& x) { return std::sin(pi * x[0]) * std::cos(pi * x[1]) + x[0] * x[1]; };
  double worst = kInf;
  for (int dim : {1, 2}) {
    double previous = kInf;
    for (Index n : {2, 4, 8, 16, 32}) {
      auto mesh = dim == 1 ? interval(n) : square(n);
      const auto u = interpolate(mesh, exact);
      const double error = integrate(*mesh, Quadrature(dim, 6), [&](const QuadraturePoint& p) {
        return phase(std::abs(u.value(p.element, p.bary) - exact(p.x)),
                     {fields.p.at(p.x), fields.q.at(p.x), fields.mu.at(p.x)});
      });
      worst = std::min(worst, previous - error);
      previous = error;
    }
  }
  cat.add("discretization", "interpolation error decreases under refinement", worst > 0.0, worst,
          "min decrease of the modular interpolation error (must be > 0)");
}

// operator

void potential_structure(Catalogue& cat) {
  auto rng = cat.rng(11);
  auto mesh = interval(32);
  const DoublePhaseModel model(mesh, constants(2.5, 3.5, 1.0));
  double lo = kInf, hi = -kInf;
  for (int k = 0; k < 20; ++k) {
    const auto u = random_function(mesh, rng), h = random_direction(mesh, rng);
    const double ratio = gradient_check(model, u, h, 1e-4) / gradient_check(model, u, h, 5e-5);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  cat.add("operator", "derivative of the energy is A (O(eps^2))", lo >= 3.5 && hi <= 4.5, lo,
          "error ratio for eps halving in [3.5, 4.5]; max " + std::to_string(hi));
}

void strict_monotonicity(Catalogue& cat) {
  auto rng = cat.rng(12);
  double worst = kInf;
  for (const auto& fields : configurations()) {
    for (auto mesh : {interval(32), square(6)}) {
      const DoublePhaseModel model(mesh, fields);
      for (int k = 0; k < 20; ++k) {
        const auto u = random_function(mesh, rng), v = random_function(mesh, rng);
        worst = std::min(worst, monotonicity_probe(model, u, v));
      }
    }
  }
  cat.add("operator", "strict monotonicity", worst > 0.0, worst, "min <A(u) - A(v), u - v> (must be > 0)");
}

void coercivity_trend(Catalogue& cat) {
  auto rng = cat.rng(13);
  auto mesh = interval(32);
  double worst = kInf, growth = kInf;
  for (const auto& fields : configurations()) {
    const DoublePhaseModel model(mesh, fields);
    const auto u = random_function(mesh, rng);
    double previous = 0.0, first = 0.0;
    for (int k = 0; k <= 10; ++k) {
      const auto tu = u.scaled(std::ldexp(1.0, k));
      const double value = apply_A(model, tu, tu) / gradient_norm(model, tu);
      if (k == 0) first = value;
      worst = std::min(worst, value - previous * (1.0 - 1e-12));
      previous = value;
    }
    growth = std::min(growth, previous / first);
  }
  cat.add("operator", "coercivity trend", worst >= 0.0 && growth > 100.0, growth,
          "min growth of <A(tu), tu> / ||tu|| over t in [1, 1024] (must be nondecreasing and > 100)");
}

void pairing_consistency(Catalogue& cat) {
  auto rng = cat.rng(14);
  double worst = 0.0;
  for (const auto& fields : configurations()) {
    for (auto mesh : {interval(32), square(6)}) {
      const DoublePhaseModel model(mesh, fields);
      const auto u = random_function(mesh, rng);
      const double rho = modular_H(model, u, true).total;
      worst = std::max(worst, std::abs(apply_A(model, u, u) - rho) / rho);
    }
  }
  cat.add("operator", "<A(u), u> equals the gradient modular", worst <= 1e-13, worst,
          describe("max relative deviation", 1e-13));
}

void jacobian_structure(Catalogue& cat) {
  auto rng = cat.rng(15);
  double asym = 0.0, min_eig = kInf;
  for (auto mesh : {interval(40), square(6)}) {
    for (const auto& fields : {constants(2.0, 3.0, 1.0), constants(2.5, 4.0, 0.5)}) {
      const DoublePhaseModel model(mesh, fields);
      const Eigen::MatrixXd j(assemble_jacobian(model, random_function(mesh, rng)));
      asym = std::max(asym, (j - j.transpose()).norm() / j.norm());
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(j).eigenvalues().minCoeff());
    }
  }
  cat.add("operator", "jacobian symmetric", asym <= 1e-14, asym, describe("max relative asymmetry", 1e-14));
  cat.add("operator", "jacobian positive semidefinite for p >= 2", min_eig >= -1e-10, min_eig,
          describe("min eigenvalue", -1e-10));
}

void simon(Catalogue& cat) {
  auto rng = cat.rng(16);
  std::normal_distribution<double> gauss;
  std::size_t failures = 0;
  double worst = kInf;
  for (double p : {1.1, 1.5, 2.0, 2.5, 3.0, 4.0}) {
    for (int k = 0; k < 10000; ++k) {
      const double a = std::pow(10.0, uniform(rng, -2.0, 2.0)), b = std::pow(10.0, uniform(rng, -2.0, 2.0));
      const Vec2 xi{a * gauss(rng), a * gauss(rng)}, eta{b * gauss(rng), b * gauss(rng)};
      const auto res = simon_inequality_check(xi, eta, p);
      if (!res.passed) ++failures;
      worst = std::min(worst, (res.rhs - res.lhs) / std::max(1.0, std::abs(res.rhs)));
    }
  }
  cat.add("operator", "simon inequalities", failures == 0, worst, describe("min relative slack", -1e-12));
}

void boundedness(Catalogue& cat) {
  auto rng = cat.rng(17);
  double worst = kInf;
  bool passed = true;
  for (const auto& fields : configurations()) {
    auto mesh = interval(24);
    const DoublePhaseModel model(mesh, fields);
    const auto est = boundedness_estimate(model, random_function(mesh, rng), cat.seed);
    passed = passed && est.passed;
    worst = std::min(worst, est.dual_norm_bound - est.empirical_sup);
  }
  cat.add("operator", "operator bounded by the norm estimate", passed, worst,
          "min (dual-norm bound - sampled sup) (must be >= 0)");
}

// eigensolver

double power_integral(const DiscreteFunction& u, double r, bool gradient) {
  return integrate(u.mesh(), Quadrature(u.mesh().dimension(), 6), [&](const QuadraturePoint& p) {
    return std::pow(gradient ? norm(u.gradient(p.element)) : std::abs(u.value(p.element, p.bary)), r);
  });
}

void rayleigh_consistency(Catalogue& cat) {
  const EigenOptions options;
  double worst = 0.0;
  for (double r : {2.0, 3.0}) {
    const auto res = first_eigenvalue(r, interval(128), options);
    const double rq = power_integral(res.eigenfunction, r, true) / power_integral(res.eigenfunction, r, false);
    worst = std::max(worst, std::abs(res.lambda - rq) / res.lambda);
  }
  cat.add("eigensolver", "eigenvalue equals the rayleigh quotient", worst <= 10.0 * options.tol, worst,
          describe("max relative deviation", 10.0 * options.tol));
}

void domain_monotonicity(Catalogue& cat) {
  const double unit = first_eigenvalue(2.0, interval(256)).lambda;
  const double twice = first_eigenvalue(2.0, interval(512, 2.0)).lambda;
  const double scaling = std::abs(4.0 * twice - unit) / unit;
  cat.add("eigensolver", "domain monotonicity and scaling", unit > twice && scaling <= 0.01, scaling,
          "lambda(0,1) > lambda(0,2); |4 lambda(0,2) - lambda(0,1)| / lambda(0,1) (bound 0.01)");
}

void variational_bound(Catalogue& cat) {
  auto rng = cat.rng(18);
  auto mesh = interval(64);
  const double lambda = first_eigenvalue(2.0, mesh).lambda;
  const SparseMatrix k = stiffness_matrix(*mesh), m = mass_matrix(*mesh);
  double worst = kInf;
  for (int j = 0; j < 50; ++j) {
    const Eigen::VectorXd c = random_function(mesh, rng).free_values();
    worst = std::min(worst, c.dot(k * c) / c.dot(m * c) / lambda - 1.0);
  }
  cat.add("eigensolver", "trial functions bound the eigenvalue", worst >= -1e-12, worst,
          describe("min RQ(v) / lambda - 1", -1e-12));
}

// solver

void newton_descent(Catalogue& cat) {
  double worst = kInf;
  std::size_t steps = 0;
  for (const auto& fields : {constants(2.0, 3.0, 1.0), constants(1.5, 2.5, 0.5), constants(3.0, 3.5, 0.0)}) {
    auto mesh = interval(64);
    const DoublePhaseModel model(mesh, fields);
    const Eigen::VectorXd rhs = assemble_load(model, [](const Point& x) { return 1.0 + x[0]; });
    const auto report = solve_monotone(model, rhs);
    double previous = kInf;
    for (double phi : report.merit_history) {
      worst = std::min(worst, previous - phi);
      previous = phi;
      ++steps;
    }
  }
  cat.add("solver", "newton merit strictly decreasing", steps > 0 && worst > 0.0, worst,
          "min decrease of 1/2 ||R||^2 per accepted step over " + std::to_string(steps) + " steps (must be > 0)");
}

void boundary_and_nontriviality(Catalogue& cat) {
  double boundary = 0.0, smallest = kInf;
  for (const std::string name : {"dp-1d", "poisson-2d"}) {
    const auto c = manufactured_case(name);
    const DoublePhaseModel model(case_mesh(c, c.mesh_dimension == 1 ? 64 : 12), c.fields);
    const auto report = solve_convection(model, c.f);
    const auto& u = report.solution;
    for (Index i = 0; i < u.mesh().num_nodes(); ++i)
      if (u.mesh().is_boundary(i)) boundary = std::max(boundary, std::abs(u.coefficient(i)));
    smallest = std::min(smallest, gradient_norm(model, u));
  }
  cat.add("solver", "solution vanishes on the boundary", boundary == 0.0, boundary, "max |u| at boundary nodes (must be 0)");
  cat.add("solver", "nonzero source gives a nontrivial solution", smallest > 0.0, smallest,
          "min ||u||_{1,H,0} (must be > 0)");
}

double l2_error(const DiscreteFunction& u, const std::function<double(const Point&)>& exact) {
  return std::sqrt(integrate(u.mesh(), Quadrature(u.mesh().dimension(), 6), [&](const QuadraturePoint& p) {
    const double d = u.value(p.element, p.bary) - exact(p.x);
    return d * d;
  }));
}

void poisson_rate(Catalogue& cat) {
  const auto c = manufactured_case("poisson-1d");
  double errors[2];
  for (int k = 0; k < 2; ++k) {
    const DoublePhaseModel model(case_mesh(c, 32 << k), c.fields);
    errors[k] = l2_error(solve_convection(model, c.f).solution, *c.exact);
  }
  const double ratio = errors[0] / errors[1];
  cat.add("solver", "poisson-1d second-order convergence", ratio >= 3.5 && ratio <= 4.5, ratio,
          "L2 error ratio n = 32 -> 64 in [3.5, 4.5]");
}

void uniqueness(Catalogue& cat) {
  const auto c = convection_linear_case(0.9);
  const DoublePhaseModel model(case_mesh(c, 128), c.fields);
  SolverConfig config;
  config.seed = cat.seed;
  const auto report = verify_uniqueness(model, c.f, config);
  cat.add("solver", "multi-start solutions agree", report.passed && report.max_distance <= 1e-8, report.max_distance,
          describe("max pairwise ||u_i - u_j||_{1,H,0}", 1e-8));
}

}  // namespace

std::vector<PropertyResult> run_catalogue(std::uint64_t seed) {
  Catalogue cat{seed, {}};
  const std::vector<std::tuple<const char*, const char*, void (*)(Catalogue&)>> suite{
      {"exponent_fields", "field bounds enclose point queries", field_bounds_consistency},
      {"exponent_fields", "A1 sufficient implies characterization", a1_implication},
      {"exponent_fields", "holder estimate nondecreasing in alpha", holder_monotone},
      {"exponent_fields", "critical exponent exceeds q where H holds", critical_exponent_above_q},
      {"musielak_space", "norm-modular relations", norm_modular_relations},
      {"musielak_space", "constant-exponent norm is the Lebesgue norm", homogeneity},
      {"musielak_space", "mu-seminorm bounded by the norm", seminorm_below_norm},
      {"musielak_space", "reverse holder inequality", reverse_holder},
      {"musielak_space", "truncation decreases the modular", truncation},
      {"musielak_space", "uniform convexity away from the diagonal", uniform_convexity},
      {"discretization", "partition of unity", partition_of_unity},
      {"discretization", "gradient of the coordinate integrates to the area", gradient_consistency},
      {"discretization", "interpolation error decreases under refinement", refinement},
      {"operator", "derivative of the energy is A (O(eps^2))", potential_structure},
      {"operator", "strict monotonicity", strict_monotonicity},
      {"operator", "coercivity trend", coercivity_trend},
      {"operator", "<A(u), u> equals the gradient modular", pairing_consistency},
      {"operator", "jacobian structure", jacobian_structure},
      {"operator", "simon inequalities", simon},
      {"operator", "operator bounded by the norm estimate", boundedness},
      {"eigensolver", "eigenvalue equals the rayleigh quotient", rayleigh_consistency},
      {"eigensolver", "domain monotonicity and scaling", domain_monotonicity},
      {"eigensolver", "trial functions bound the eigenvalue", variational_bound},
      {"solver", "newton merit strictly decreasing", newton_descent},
      {"solver", "boundary values and nontriviality", boundary_and_nontriviality},
      {"solver", "poisson-1d second-order convergence", poisson_rate},
      {"solver", "multi-start solutions agree", uniqueness},
  };
  for (const auto& [module, name, body] : suite) cat.run(module, name, [&cat, body = body] { body(cat); });
  return cat.results;
}

}  // namespace dpkit::cli
