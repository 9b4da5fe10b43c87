#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "dpkit/eigensolver.hpp"
#include "dpkit/errors.hpp"
#include "dpkit/operator.hpp"

using namespace dpkit;
using std::numbers::pi;

namespace {

std::shared_ptr<const Mesh> interval(Index n, double b = 1.0) {
  return std::make_shared<const Mesh>(build_interval_mesh(0.0, b, n));
}

double power_integral(const DiscreteFunction& u, double r, bool gradient) {
  const Quadrature q(u.mesh().dimension(), 6);
  return integrate(u.mesh(), q, [&](const QuadraturePoint& p) {
    return std::pow(gradient ? norm(u.gradient(p.element)) : std::abs(u.value(p.element, p.bary)), r);
  });
}

/// Smallest eigenvalue of the dense P1 pencil.
double dense_pencil(const Mesh& mesh) {
  const Eigen::MatrixXd k(stiffness_matrix(mesh)), m(mass_matrix(mesh));
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, m);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("first Laplacian eigenvalue on the unit interval") {
  const auto r = first_eigenvalue(2.0, interval(512));
  CHECK(std::abs(r.lambda - pi * pi) / (pi * pi) < 0.005);
  CHECK(r.iterations > 0);
  CHECK(r.history.size() == static_cast<std::size_t>(r.iterations));
  // one sign on free nodes
  const Eigen::VectorXd f = r.eigenfunction.free_values();
  CHECK((f.array() > 0.0).all());
  CHECK(power_integral(r.eigenfunction, 2.0, false) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r.lambda - power_integral(r.eigenfunction, 2.0, true)) <= 1e-8 * r.lambda);
}

TEST_CASE("first Laplacian eigenvalue on the unit square") {
  auto mesh = std::make_shared<const Mesh>(build_rect_mesh({0.0, 1.0}, {0.0, 1.0}, 64, 64));
  const auto r = first_eigenvalue(2.0, mesh);
  CHECK(std::abs(r.lambda - 2.0 * pi * pi) / (2.0 * pi * pi) < 0.01);
}

TEST_CASE("refinement decreases the discrete eigenvalue toward its limit") {
  double previous = 1e300;
  for (Index n : {4, 8, 16, 32, 64}) {
    auto mesh = interval(n);
    const double lambda = first_eigenvalue(2.0, mesh).lambda;
    CHECK(lambda == doctest::Approx(dense_pencil(*mesh)).epsilon(1e-9));
    CHECK(lambda < previous);
    CHECK(lambda > pi * pi);
    previous = lambda;
  }
}

TEST_CASE("domain monotonicity and scaling") {
  const double unit = first_eigenvalue(2.0, interval(256)).lambda;
  const double twice = first_eigenvalue(2.0, interval(512, 2.0)).lambda;
  CHECK(unit > twice);
  CHECK(std::abs(twice * 4.0 - unit) / unit < 0.01);
}

TEST_CASE("trial functions bound the eigenvalue from above") {
  auto mesh = interval(64);
  const double lambda = first_eigenvalue(2.0, mesh).lambda;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd free(mesh->num_free());
    for (Index i = 0; i < free.size(); ++i) free[i] = u(rng);
    const auto v = DiscreteFunction::from_free(mesh, free);
    const Eigen::VectorXd c = v.free_values();
    const double rq = c.dot(stiffness_matrix(*mesh) * c) / c.dot(mass_matrix(*mesh) * c);
    CHECK(rq >= lambda * (1.0 - 1e-12));
  }
}

TEST_CASE("first eigenvalue of the r-Laplacian for r != 2") {
  // lambda_{1,r}(0, 1) = (r - 1) pi_r^r with pi_r = 2 pi / (r sin(pi / r))
  for (double r : {1.5, 3.0}) {
    const double pi_r = 2.0 * pi / (r * std::sin(pi / r));
    const double exact = (r - 1.0) * std::pow(pi_r, r);
    const auto res = first_eigenvalue(r, interval(256));
    CHECK(std::abs(res.lambda - exact) / exact < 0.01);
    CHECK((res.eigenfunction.free_values().array() > 0.0).all());
    const double rq = power_integral(res.eigenfunction, r, true) / power_integral(res.eigenfunction, r, false);
    CHECK(std::abs(res.lambda - rq) / res.lambda < 1e-6);
  }
}

TEST_CASE("eigensolver input validation") {
  CHECK_THROWS_AS(first_eigenvalue(1.0, interval(8)), InvalidInput);
  CHECK_THROWS_AS(first_eigenvalue(2.0, interval(1)), InvalidInput);
}

TEST_CASE("coercivity margin") {
  CHECK(coercivity_margin(0.5, 0.0, 9.0) == doctest::Approx(0.5));
  CHECK(coercivity_margin(0.0, 9.0, 9.0) == doctest::Approx(0.0));
  CHECK(coercivity_margin(0.3, 3.0, 9.8696) == doctest::Approx(0.3960).epsilon(1e-4));
  CHECK_THROWS_AS(coercivity_margin(-0.1, 0.0, 9.0), InvalidInput);
  CHECK_THROWS_AS(coercivity_margin(0.1, 0.0, 0.0), InvalidInput);
}

TEST_CASE("uniqueness margin") {
  CHECK(uniqueness_margin(0.0, 0.0, 9.0) == 1.0);
  CHECK(uniqueness_margin(9.0, 0.0, 9.0) == doctest::Approx(0.0));
  CHECK(uniqueness_margin(1.0, 1.0, 9.8696) == doctest::Approx(0.5804).epsilon(1e-4));
  CHECK_THROWS_AS(uniqueness_margin(0.0, -1.0, 9.0), InvalidInput);
}
