#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dpkit/errors.hpp"
#include "dpkit/modular.hpp"

using namespace dpkit;

namespace {

std::shared_ptr<const Mesh> interval(Index n) { return std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, n)); }

CoefficientFields constants(double p, double q, double mu) {
  return {ExponentField::constant(p), ExponentField::constant(q), ExponentField::constant(mu)};
}

DiscreteFunction constant_function(const std::shared_ptr<const Mesh>& mesh, double c) {
  return interpolate(mesh, [c](const Point&) { return c; });
}

/// Root of l^3 = l + 1 by plain bisection.
double plastic_number() {
  double lo = 1.0, hi = 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid - mid - 1.0 > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

DiscreteFunction random_function(const std::shared_ptr<const Mesh>& mesh, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd free(mesh->num_free());
  for (Index i = 0; i < free.size(); ++i) free[i] = u(rng);
  return DiscreteFunction::from_free(mesh, free);
}

}  // namespace

TEST_CASE("value modular examples") {
  auto mesh = interval(8);
  const DoublePhaseModel ones(mesh, constants(2.0, 3.0, 1.0));
  const auto r = modular_H(ones, constant_function(mesh, 1.0));
  CHECK(r.total == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.p_part == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.q_part == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(modular_H(ones, DiscreteFunction::zero(mesh)).total == 0.0);

  const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
  const auto x = interpolate(mesh, [](const Point& p) { return p[0]; });
  CHECK(modular_H(l2, x).total == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(modular_H(l2, x, true).total == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(modular_H(l2, constant_function(interval(8), 1.0)), InvalidInput);
}

TEST_CASE("combined modular examples") {
  auto mesh = interval(8);
  const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
  CHECK(modular_hat(l2, DiscreteFunction::zero(mesh)).total == 0.0);
  CHECK(modular_hat(l2, constant_function(mesh, 3.0)).total == doctest::Approx(9.0).epsilon(1e-14));

  const DoublePhaseModel dp(mesh, constants(2.0, 3.0, 1.0));
  const auto x = interpolate(mesh, [](const Point& p) { return p[0]; });
  const auto r = modular_hat(dp, x);
  CHECK(r.total == doctest::Approx(2.0 + 1.0 / 3.0 + 0.25).epsilon(1e-13));
  CHECK(r.gradient_p == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.gradient_q == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.value_p == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(r.value_q == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(r.total == doctest::Approx(r.p_part + r.q_part).epsilon(1e-15));
}

TEST_CASE("luxemburg norm examples") {
  auto mesh = interval(8);
  const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
  CHECK(luxemburg_norm(l2, constant_function(mesh, 2.0)).norm == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(luxemburg_norm(l2, DiscreteFunction::zero(mesh)).norm == 0.0);

  const DoublePhaseModel dp(mesh, constants(2.0, 3.0, 1.0));
  const auto n = luxemburg_norm(dp, constant_function(mesh, 1.0));
  CHECK(std::abs(n.norm - plastic_number()) < 1e-10);
  CHECK(n.residual <= 1e-12);
  CHECK(n.iterations > 0);
  CHECK_THROWS_AS(luxemburg_norm(dp, constant_function(mesh, 1.0), ModularKind::values, 0.0), InvalidInput);
}

TEST_CASE("constant exponent norm is the classical Lebesgue norm") {
  auto mesh = interval(32);
  std::mt19937_64 rng(5);
  for (double p : {1.2, 2.0, 3.7}) {
    const DoublePhaseModel model(mesh, constants(p, p, 0.0));
    const auto u = random_function(mesh, rng, 3.0);
    const double direct = std::pow(modular_H(model, u).total, 1.0 / p);
    CHECK(luxemburg_norm(model, u).norm == doctest::Approx(direct).epsilon(1e-11));
  }
}

TEST_CASE("mu seminorm") {
  auto mesh = interval(8);
  const DoublePhaseModel none(mesh, constants(2.0, 3.0, 0.0));
  CHECK(seminorm_mu(none, constant_function(mesh, 5.0)).norm == 0.0);
  const DoublePhaseModel quad(mesh, constants(2.0, 2.0, 1.0));
  CHECK(seminorm_mu(quad, constant_function(mesh, 3.0)).norm == doctest::Approx(3.0).epsilon(1e-12));
  const DoublePhaseModel cubic(mesh, constants(2.0, 3.0, 1.0));
  CHECK(seminorm_mu(cubic, constant_function(mesh, 1.0)).norm == doctest::Approx(1.0).epsilon(1e-12));

  // the seminorm never exceeds the full norm
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const auto u = random_function(mesh, rng, 4.0);
    CHECK(seminorm_mu(cubic, u).norm <= luxemburg_norm(cubic, u).norm * (1.0 + 1e-12));
  }
}

TEST_CASE("norm-modular relations") {
  auto mesh = interval(8);
  const DoublePhaseModel dp(mesh, constants(2.0, 3.0, 1.0));
  const auto r = check_norm_modular(dp, constant_function(mesh, 1.0));
  CHECK(r.passed);
  CHECK(r.modular == doctest::Approx(2.0));
  CHECK(r.norm > 1.0);
  CHECK(std::pow(r.norm, 2.0) <= 2.0);
  CHECK(2.0 <= std::pow(r.norm, 3.0));

  const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
  const auto half = check_norm_modular(l2, constant_function(mesh, 0.5));
  CHECK(half.passed);
  CHECK(half.norm == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half.modular == doctest::Approx(0.25).epsilon(1e-14));

  // scaled so that the modular is one
  const auto u = interpolate(mesh, [](const Point& x) { return 1.0 + x[0]; });
  const double lambda = luxemburg_norm(dp, u).norm;
  const auto unit = u.scaled(1.0 / lambda);
  CHECK(luxemburg_norm(dp, unit).norm == doctest::Approx(1.0).epsilon(1e-10));

  std::mt19937_64 rng(17);
  for (int k = 0; k < 50; ++k) {
    const auto v = random_function(mesh, rng, k % 2 ? 0.2 : 5.0);
    for (auto kind : {ModularKind::values, ModularKind::gradients, ModularKind::combined}) {
      const auto rel = check_norm_modular(dp, v, kind);
      CHECK(rel.passed);
      CHECK(rel.unit_ball_residual <= 1e-10);
      CHECK(rel.lower_slack >= -1e-12);
      CHECK(rel.upper_slack >= -1e-12);
    }
  }
  CHECK_THROWS_AS(check_norm_modular(dp, DiscreteFunction::zero(mesh)), InvalidInput);
}

TEST_CASE("sobolev conjugate inverse") {
  const CoefficientFields quad = constants(2.0, 2.0, 0.0);
  CHECK(sobolev_conjugate_inverse(quad, {0.3, 0.0}, 0.0, 2) == 0.0);
  CHECK(sobolev_conjugate_inverse(quad, {0.3, 0.0}, 1.0, 2) == doctest::Approx(2.0).epsilon(1e-10));

  const CoefficientFields dp = constants(1.5, 2.5, 0.7);
  double previous = 0.0;
  for (double s : {0.1, 0.5, 1.0, 1.7, 2.0, 5.0, 40.0}) {
    const double v = sobolev_conjugate_inverse(dp, {0.5, 0.0}, s, 3);
    CHECK(v > previous);
    previous = v;
  }
  // linear branch: int_0^s tau^{-1/N} / H(1) = s^{1-1/N} / ((1 - 1/N) H(1))
  CHECK(sobolev_conjugate_inverse(dp, {0.5, 0.0}, 1.2, 3) ==
        doctest::Approx(std::pow(1.2, 2.0 / 3.0) / (2.0 / 3.0) / 1.7).epsilon(1e-10));
  CHECK_THROWS_AS(sobolev_conjugate_inverse(dp, {0.5, 0.0}, -1.0, 3), InvalidInput);
}

TEST_CASE("reverse holder inequality") {
  auto mesh = interval(8);
  const Quadrature q(1, 4);
  const auto one = constant_function(mesh, 1.0);
  const auto r1 = reverse_holder_check(one, one, ExponentField::constant(2.0), q);
  CHECK(r1.lhs == doctest::Approx(1.0));
  CHECK(r1.rhs == doctest::Approx(0.5));
  CHECK(r1.passed);

  const auto r0 = reverse_holder_check(DiscreteFunction::zero(mesh), one, ExponentField::constant(2.0), q);
  CHECK(r0.lhs == 0.0);
  CHECK(r0.rhs == 0.0);
  CHECK(r0.passed);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.01, 10.0), ur(1.5, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> f(16), g(16), r(16), w(16, 1.0 / 16.0);
    for (int k = 0; k < 16; ++k) {
      f[k] = u(rng);
      g[k] = u(rng);
      r[k] = ur(rng);
    }
    const auto res = reverse_holder_check(f, g, r, w);
    CHECK(res.passed);
    CHECK(res.lhs - res.rhs >= -1e-12);
  }
  std::vector<double> f{1.0, 1.0}, g{1.0, 0.0}, r{2.0, 2.0}, w{0.5, 0.5};
  CHECK_THROWS_AS(reverse_holder_check(f, g, r, w), InvalidInput);
}

TEST_CASE("truncation") {
  auto mesh = interval(10);
  const auto minus_one = constant_function(mesh, -1.0);
  CHECK(truncate(minus_one, TruncationSign::plus).is_zero());
  const auto u = interpolate(mesh, [](const Point& x) { return x[0] - 0.5; });
  const auto plus = truncate(u, TruncationSign::plus);
  const auto minus = truncate(u, TruncationSign::minus);
  for (Index i = 0; i < mesh->num_nodes(); ++i) {
    CHECK(plus.coefficient(i) == std::max(mesh->node(i)[0] - 0.5, 0.0));
    CHECK(plus.coefficient(i) + minus.coefficient(i) == std::abs(u.coefficient(i)));
    CHECK(plus.coefficient(i) - minus.coefficient(i) == u.coefficient(i));
  }
  const DoublePhaseModel dp(mesh, constants(2.0, 3.0, 1.0));
  CHECK(modular_H(dp, plus).total <= modular_H(dp, u).total);
  CHECK(modular_H(dp, minus).total <= modular_H(dp, u).total);
}

TEST_CASE("uniform convexity probe") {
  const PhaseCoefficients l2{2.0, 2.0, 0.0};
  const auto same = uniform_convexity_probe(l2, 0.7, 0.7, 0.1);
  CHECK(same.near_branch);
  CHECK(same.delta == doctest::Approx(0.0));
  CHECK(same.passed);

  const auto far = uniform_convexity_probe(l2, 1.0, 0.0, 0.5);
  CHECK_FALSE(far.near_branch);
  CHECK(far.delta == doctest::Approx(0.5));
  CHECK(far.passed);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> up(1.5, 3.0), uq(2.0, 4.0), um(0.0, 2.0), ut(0.0, 10.0);
  int far_branches = 0;
  for (int k = 0; k < 5000; ++k) {
    double p = up(rng), q = uq(rng);
    if (q < p) std::swap(p, q);
    const PhaseCoefficients c{p, q, um(rng)};
    const auto probe = uniform_convexity_probe(c, ut(rng), ut(rng), 0.2);
    if (!probe.near_branch) {
      ++far_branches;
      CHECK(probe.delta > 0.0);
    }
    CHECK(probe.passed);
  }
  CHECK(far_branches > 1000);
  CHECK_THROWS_AS(uniform_convexity_probe(l2, -1.0, 0.0, 0.5), InvalidInput);
  CHECK_THROWS_AS(uniform_convexity_probe(l2, 1.0, 0.0, 1.0), InvalidInput);
}

TEST_CASE("poincare ratio") {
  auto coarse = interval(2);
  const DoublePhaseModel l2(coarse, constants(2.0, 2.0, 0.0));
  Eigen::VectorXd one(1);
  one << 1.0;
  const auto hat = DiscreteFunction::from_free(coarse, one);
  // ||hat||_2 = sqrt(1/3), ||hat'||_2 = 2
  CHECK(poincare_ratio(l2, hat) == doctest::Approx(std::sqrt(1.0 / 3.0) / 2.0).epsilon(1e-10));
  CHECK(poincare_ratio(l2, hat) < 1.0);

  for (Index n : {4, 16, 64, 256}) {
    auto mesh = interval(n);
    const DoublePhaseModel model(mesh, constants(2.0, 2.0, 0.0));
    Eigen::VectorXd free = Eigen::VectorXd::Zero(mesh->num_free());
    free[(n - 2) / 2] = 1.0;
    const double ratio = poincare_ratio(model, DiscreteFunction::from_free(mesh, free));
    CHECK(ratio <= 1.0 / std::numbers::pi);
  }

  const DoublePhaseModel dp(coarse, constants(2.0, 3.0, 1.0));
  const double r1 = poincare_ratio(dp, hat);
  const double r2 = poincare_ratio(dp, hat.scaled(2.0));
  CHECK(std::isfinite(r1));
  CHECK(std::isfinite(r2));
  CHECK_THROWS_AS(poincare_ratio(l2, DiscreteFunction::zero(coarse)), InvalidInput);
}
