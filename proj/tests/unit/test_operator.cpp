#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "dpkit/errors.hpp"
#include "dpkit/modular.hpp"
#include "dpkit/operator.hpp"

using namespace dpkit;

namespace {

std::shared_ptr<const Mesh> interval(Index n) { return std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, n)); }
std::shared_ptr<const Mesh> square(Index n) {
  return std::make_shared<const Mesh>(build_rect_mesh({0.0, 1.0}, {0.0, 1.0}, n, n));
}

CoefficientFields constants(double p, double q, double mu) {
  return {ExponentField::constant(p), ExponentField::constant(q), ExponentField::constant(mu)};
}

DiscreteFunction random_function(const std::shared_ptr<const Mesh>& mesh, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd free(mesh->num_free());
  for (Index i = 0; i < free.size(); ++i) free[i] = u(rng);
  return DiscreteFunction::from_free(mesh, free);
}

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_CASE("energy examples") {
  auto mesh = interval(8);
  const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
  const auto c = interpolate(mesh, [](const Point&) { return 4.0; });
  const auto x = interpolate(mesh, [](const Point& p) { return p[0]; });
  CHECK(energy_I(l2, c) == 0.0);
  CHECK(energy_I(l2, x) == doctest::Approx(0.5).epsilon(1e-14));
  const DoublePhaseModel dp(mesh, constants(2.0, 3.0, 1.0));
  CHECK(energy_I(dp, x) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("operator pairing examples") {
  auto mesh = interval(8);
  std::mt19937_64 rng(1);
  const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
  const auto c = interpolate(mesh, [](const Point&) { return -1.5; });
  const auto v = random_function(mesh, rng);
  CHECK(apply_A(l2, c, v) == 0.0);
  const auto x = interpolate(mesh, [](const Point& p) { return p[0]; });
  CHECK(apply_A(l2, x, x) == doctest::Approx(1.0).epsilon(1e-14));

  const DoublePhaseModel dp(square(5), {ExponentField::affine({0.5, 0.2}, 1.6), ExponentField::affine({0.3, 0.1}, 2.8),
                                        ExponentField::affine({1.0, -0.5}, 1.0)});
  for (int k = 0; k < 10; ++k) {
    const auto u = random_function(dp.mesh_ptr(), rng, 3.0);
    CHECK(apply_A(dp, u, u) == doctest::Approx(modular_H(dp, u, true).total).epsilon(1e-13));
  }
  CHECK_THROWS_AS(apply_A(l2, x, DiscreteFunction::zero(interval(8))), InvalidInput);
}

TEST_CASE("operator B and energy J") {
  auto mesh = interval(8);
  const DoublePhaseModel dp(mesh, constants(2.0, 3.0, 1.0));
  const auto c = interpolate(mesh, [](const Point&) { return -2.0; });
  CHECK(apply_B(dp, c, c) == doctest::Approx(4.0 + 8.0).epsilon(1e-14));
  CHECK(energy_J(dp, DiscreteFunction::zero(mesh)) == 0.0);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const auto u = interpolate(mesh, [&](const Point&) { return std::uniform_real_distribution<double>(-2, 2)(rng); });
    CHECK(apply_B(dp, u, u) == doctest::Approx(modular_hat(dp, u).total).epsilon(1e-13));
  }
}

TEST_CASE("residual examples") {
  auto mesh = interval(16);
  const DoublePhaseModel lin(mesh, constants(2.0, 2.0, 1.0));
  const Eigen::VectorXd zero_rhs = Eigen::VectorXd::Zero(mesh->num_free());
  CHECK(assemble_residual(lin, DiscreteFunction::zero(mesh), zero_rhs).residual.isZero(0.0));

  std::mt19937_64 rng(3);
  const auto u = random_function(mesh, rng);
  const Eigen::VectorXd load = assemble_load(lin, [](const Point& x) { return std::sin(std::numbers::pi * x[0]); });
  const Eigen::VectorXd rhs = 2.0 * load;
  // direct Laplacian stiffness: tridiagonal (2, -1) / h
  const double h = 1.0 / 16.0;
  Eigen::VectorXd ku(mesh->num_free());
  const Eigen::VectorXd f = u.free_values();
  for (Index i = 0; i < f.size(); ++i)
    ku[i] = (2.0 * f[i] - (i > 0 ? f[i - 1] : 0.0) - (i + 1 < f.size() ? f[i + 1] : 0.0)) / h;
  const Eigen::VectorXd r = assemble_residual(lin, u, rhs).residual;
  CHECK((r - 2.0 * (ku - load)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(assemble_residual(lin, u, Eigen::VectorXd::Zero(3)), InvalidInput);
}

TEST_CASE("jacobian of the linear operator is the stiffness matrix") {
  for (const auto& mesh : {interval(12), square(4)}) {
    const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
    std::mt19937_64 rng(4);
    const SparseMatrix k = stiffness_matrix(*mesh);
    for (double eps : {1e-8, 1e-3}) {
      const SparseMatrix j = assemble_jacobian(l2, random_function(mesh, rng), eps);
      CHECK((dense(j) - dense(k)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  CHECK_THROWS_AS(assemble_jacobian(DoublePhaseModel(interval(4), constants(2, 2, 0)),
                                    DiscreteFunction::zero(interval(4)), 0.0),
                  InvalidInput);
}

TEST_CASE("jacobian symmetry, definiteness and directional consistency") {
  auto mesh = square(5);
  std::mt19937_64 rng(5);
  const DoublePhaseModel dp(mesh, {ExponentField::affine({0.5, 0.0}, 2.2), ExponentField::affine({0.0, 0.5}, 3.0),
                                   ExponentField::affine({1.0, 1.0}, 0.1)});
  for (int k = 0; k < 5; ++k) {
    const auto u = random_function(mesh, rng);
    const Eigen::MatrixXd j = dense(assemble_jacobian(dp, u));
    CHECK((j - j.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(j);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);

    const auto h = random_function(mesh, rng);
    const Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh->num_free());
    const Eigen::VectorXd r0 = assemble_residual(dp, u, rhs).residual;
    const Eigen::VectorXd jh = j * h.free_values();
    double previous = 1e300;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      const Eigen::VectorXd r1 = assemble_residual(dp, u + h.scaled(delta), rhs).residual;
      const double err = ((r1 - r0) / delta - jh).norm() / jh.norm();
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous < 1e-3);
  }
}

TEST_CASE("gradient check") {
  auto mesh = interval(16);
  std::mt19937_64 rng(6);
  const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
  for (int k = 0; k < 10; ++k) {
    const auto u = random_function(mesh, rng), h = random_function(mesh, rng);
    CHECK(gradient_check(l2, u, h, 1e-3) <= 1e-12);
    CHECK(gradient_check(l2, u, h, 0.7) <= 1e-12);
  }

  const DoublePhaseModel dp(mesh, constants(2.5, 3.5, 1.0));
  for (int k = 0; k < 10; ++k) {
    const auto u = random_function(mesh, rng), h = random_function(mesh, rng);
    const double ratio = gradient_check(dp, u, h, 1e-2) / gradient_check(dp, u, h, 5e-3);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }

  // u = x, h = midpoint hat, p = 3: d/dt int |u' + t h'|^3 / 3 = int |u'| u' h' = 0
  auto two = interval(2);
  const DoublePhaseModel cubic(two, constants(3.0, 3.0, 0.0));
  const auto x = interpolate(two, [](const Point& p) { return p[0]; });
  Eigen::VectorXd one(1);
  one << 1.0;
  const auto hat = DiscreteFunction::from_free(two, one);
  CHECK(apply_A(cubic, x, hat) == doctest::Approx(0.0));
  CHECK(gradient_check(cubic, x, hat, 1e-5) <= 1e-8);
}

TEST_CASE("strict monotonicity") {
  auto mesh = interval(16);
  std::mt19937_64 rng(7);
  for (double p : {1.5, 2.0, 3.0}) {
    const DoublePhaseModel model(mesh, constants(p, p + 0.5, 1.0));
    const auto u = random_function(mesh, rng);
    CHECK(monotonicity_probe(model, u, DiscreteFunction::zero(mesh)) ==
          doctest::Approx(modular_H(model, u, true).total).epsilon(1e-13));
    CHECK(monotonicity_probe(model, u, u) == 0.0);
    double worst = 1e300;
    for (int k = 0; k < 200; ++k)
      worst = std::min(worst, monotonicity_probe(model, random_function(mesh, rng), random_function(mesh, rng)));
    CHECK(worst > 0.0);
  }
}

TEST_CASE("simon inequalities") {
  CHECK(simon_constant_lower(2.0) == 1.0);
  CHECK(simon_constant_upper(2.0) == 1.0);
  const auto eq = simon_inequality_check({1.0, 0.0}, {0.0, 1.0}, 2.0);
  CHECK(eq.lhs == doctest::Approx(2.0));
  CHECK(eq.rhs == doctest::Approx(2.0));
  CHECK(eq.passed);
  const auto same = simon_inequality_check({0.3, -0.2}, {0.3, -0.2}, 3.0);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  CHECK(same.passed);
  CHECK(simon_inequality_check({0.0, 0.0}, {1.0, 0.0}, 1.5).passed);
  CHECK_THROWS_AS(simon_inequality_check({1.0, 0.0}, {0.0, 1.0}, 0.5), InvalidInput);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (double p : {1.1, 1.5, 2.0, 2.5, 3.0, 4.0})
    for (int k = 0; k < 5000; ++k) CHECK(simon_inequality_check({u(rng), u(rng)}, {u(rng), u(rng)}, p).passed);
}

TEST_CASE("boundedness estimate") {
  auto mesh = interval(16);
  const DoublePhaseModel l2(mesh, constants(2.0, 2.0, 0.0));
  const auto zero = boundedness_estimate(l2, DiscreteFunction::zero(mesh));
  CHECK(zero.dual_norm_bound == 0.0);
  CHECK(zero.empirical_sup == 0.0);

  std::mt19937_64 rng(9);
  const auto u = random_function(mesh, rng);
  const auto lin = boundedness_estimate(l2, u);
  CHECK(lin.passed);
  CHECK(lin.empirical_sup == doctest::Approx(lin.dual_norm_bound).epsilon(1e-9));
  CHECK(lin.empirical_sup == doctest::Approx(std::sqrt(modular_H(l2, u, true).total)).epsilon(1e-9));

  const DoublePhaseModel dp(mesh, constants(2.0, 3.0, 1.0));
  for (int k = 0; k < 5; ++k) {
    const auto b = boundedness_estimate(dp, random_function(mesh, rng, 3.0), 100 + k);
    CHECK(b.passed);
    CHECK(b.empirical_sup < b.dual_norm_bound);
    CHECK(b.directions == static_cast<std::size_t>(mesh->num_free()) + 101);
  }
}

TEST_CASE("coercivity trend") {
  auto mesh = interval(16);
  std::mt19937_64 rng(10);
  const DoublePhaseModel dp(mesh, constants(1.8, 2.6, 0.5));
  const auto u = random_function(mesh, rng);
  double previous = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const auto tu = u.scaled(std::ldexp(1.0, k));
    const double ratio = apply_A(dp, tu, tu) / gradient_norm(dp, tu);
    CHECK(ratio >= previous);
    previous = ratio;
  }
  CHECK(previous > 100.0);
}

TEST_CASE("coordinate export") {
  auto mesh = interval(3);
  std::ostringstream out;
  export_coo(out, stiffness_matrix(*mesh));
  std::istringstream in(out.str());
  int rows = 0;
  long r = 0, c = 0;
  double v = 0.0;
  while (in >> r >> c >> v) {
    ++rows;
    CHECK(v == doctest::Approx(r == c ? 6.0 : -3.0));
  }
  CHECK(rows == 4);
}
