#include "dpkit/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "dpkit/errors.hpp"
#include "dpkit/modular.hpp"
#include "dpkit/operator.hpp"
#include "dpkit/solver.hpp"

namespace dpkit {
namespace {

/// Product of sine bumps over the bounding box of the mesh.
DiscreteFunction bump_guess(const std::shared_ptr<const Mesh>& mesh) {
  Point lo{mesh->node(0)};
  Point hi{mesh->node(0)};
  for (const auto& x : mesh->nodes())
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], x[d]);
      hi[d] = std::max(hi[d], x[d]);
    }
  const int dim = mesh->dimension();
  DiscreteFunction u = interpolate(mesh, [&](const Point& x) {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= std::sin(std::numbers::pi * (x[d] - lo[d]) / (hi[d] - lo[d]));
    return std::max(v, 0.0);
  });
  // Interior nodes where the bump vanishes (non-rectangular domains) get a small positive value.
  Eigen::VectorXd free = u.free_values();
  for (Index i = 0; i < free.size(); ++i) free[i] = std::max(free[i], 1e-3);
  return DiscreteFunction::from_free(mesh, free);
}

[[noreturn]] void fail(double r, const std::vector<double>& history) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "eigenvalue iteration for r = " << r << " did not converge; last Rayleigh quotients:";
  const std::size_t start = history.size() > 5 ? history.size() - 5 : 0;
  for (std::size_t k = start; k < history.size(); ++k) msg << ' ' << history[k];
  throw NumericError(msg.str());
}

EigenResult linear_eigenvalue(const std::shared_ptr<const Mesh>& mesh, const EigenOptions& options) {
  const SparseMatrix k = stiffness_matrix(*mesh);
  const SparseMatrix m = mass_matrix(*mesh);
  Eigen::SimplicialLDLT<SparseMatrix> solver(k);
  if (solver.info() != Eigen::Success) throw NumericError("stiffness matrix factorization failed");

  Eigen::VectorXd x = bump_guess(mesh).free_values();
  x /= std::sqrt(x.dot(m * x));
  std::vector<double> history;
  double lambda = x.dot(k * x);
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::VectorXd y = solver.solve(m * x);
    if (solver.info() != Eigen::Success || !y.allFinite()) throw NumericError("inverse iteration solve failed");
    x = y / std::sqrt(y.dot(m * y));
    const double next = x.dot(k * x) / x.dot(m * x);
    history.push_back(next);
    const bool done = std::abs(next - lambda) <= options.tol * next;
    lambda = next;
    if (done) {
      if (x.sum() < 0.0) x = -x;
      return EigenResult{lambda, DiscreteFunction::from_free(mesh, x), it, history};
    }
  }
  fail(2.0, history);
}

EigenResult nonlinear_eigenvalue(double r, const std::shared_ptr<const Mesh>& mesh, const EigenOptions& options) {
  const CoefficientFields fields{ExponentField::constant(r), ExponentField::constant(r), ExponentField::constant(0.0)};
  const DoublePhaseModel model(mesh, fields, options.quadrature_order);

  auto normalize = [&](const DiscreteFunction& u) {
    const double mass = modular_H(model, u).total;
    if (!(mass > 0.0)) throw NumericError("eigenvalue iterate vanished");
    return u.scaled(std::pow(mass, -1.0 / r));
  };
  auto rayleigh = [&](const DiscreteFunction& u) { return modular_H(model, u, true).total / modular_H(model, u).total; };

  DiscreteFunction u = normalize(bump_guess(mesh));
  double lambda = rayleigh(u);
  std::vector<double> history;
  SolverConfig inner;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd rhs = assemble_load(model, std::function<double(const QuadraturePoint&)>(
        [&](const QuadraturePoint& qp) {
          const double v = u.value(qp.element, qp.bary);
          return v == 0.0 ? 0.0 : lambda * std::pow(std::abs(v), r - 2.0) * v;
        }));
    // the r-Laplacian flux is not Lipschitz for r < 2, so the attainable residual scales with the load
    inner.tol = std::max(options.newton_tol, 1e-9 * rhs.lpNorm<Eigen::Infinity>());
    const SolveReport step = solve_monotone(model, rhs, inner, u);
    u = normalize(step.solution);
    const double next = rayleigh(u);
    history.push_back(next);
    const bool done = std::abs(next - lambda) <= options.tol * next;
    lambda = next;
    if (done) {
      if (u.coefficients().sum() < 0.0) u = u.scaled(-1.0);
      return EigenResult{lambda, u, it, history};
    }
  }
  fail(r, history);
}

}  // namespace

EigenResult first_eigenvalue(double r, std::shared_ptr<const Mesh> mesh, const EigenOptions& options) {
  if (!(r > 1.0) || !std::isfinite(r)) throw InvalidInput("eigenvalue exponent must satisfy r > 1");
  if (!mesh || mesh->empty() || mesh->num_free() == 0) throw InvalidInput("eigenvalue problem needs free nodes");
  if (!(options.tol > 0.0)) throw InvalidInput("eigenvalue tolerance must be positive");
  if (r == 2.0) return linear_eigenvalue(mesh, options);
  return nonlinear_eigenvalue(r, mesh, options);
}

double coercivity_margin(double b1, double b2, double lambda_1_pminus) {
  if (!(b1 >= 0.0 && b2 >= 0.0)) throw InvalidInput("coercivity constants must be >= 0");
  if (!(lambda_1_pminus > 0.0)) throw InvalidInput("eigenvalue must be positive");
  return 1.0 - b1 - b2 / lambda_1_pminus;
}

double uniqueness_margin(double c1, double c2, double lambda_1_2) {
  if (!(c1 >= 0.0 && c2 >= 0.0)) throw InvalidInput("uniqueness constants must be >= 0");
  if (!(lambda_1_2 > 0.0)) throw InvalidInput("eigenvalue must be positive");
  return 1.0 - (c1 / lambda_1_2 + c2 / std::sqrt(lambda_1_2));
}

}  // namespace dpkit
