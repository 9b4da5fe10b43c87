#include "dpkit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "dpkit/eigensolver.hpp"
#include "dpkit/errors.hpp"
#include "dpkit/modular.hpp"
#include "dpkit/operator.hpp"

namespace dpkit {
namespace {

std::string history_tail(const std::vector<double>& history) {
  std::ostringstream out;
  out.precision(6);
  const std::size_t start = history.size() > 6 ? history.size() - 6 : 0;
  for (std::size_t k = start; k < history.size(); ++k) out << (k == start ? "" : ", ") << history[k];
  return out.str();
}

/// ||phi_i||_{1,H,0} for every free node, from the element supports only.
std::vector<double> hat_norms(const DoublePhaseModel& model) {
  const Mesh& mesh = model.mesh();
  std::vector<ModularSamples> samples(static_cast<std::size_t>(mesh.num_free()));
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.element(e);
    for (int j = 0; j < mesh.vertices_per_element(); ++j) {
      const Index i = mesh.free_index(el[j]);
      if (i < 0) continue;
      const double g = norm(mesh.basis_gradient(e, j));
      for (std::size_t k = 0; k < model.points_per_element(); ++k)
        samples[static_cast<std::size_t>(i)].add(model.weight(e, k), g, model.coefficients(e, k));
    }
  }
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].luxemburg(kDefaultNormTol).norm;
  return out;
}

double weak_residual_with(const DoublePhaseModel& model, const DiscreteFunction& u, const ConvectionTerm& f,
                          const std::vector<double>& norms) {
  const Eigen::VectorXd r = apply_A_basis(model, u) - convection_load(model, u, f);
  double worst = 0.0;
  for (Index i = 0; i < r.size(); ++i) worst = std::max(worst, std::abs(r[i]) / (1.0 + norms[static_cast<std::size_t>(i)]));
  return worst;
}

double normalized_slack(double lhs, double rhs) { return (rhs - lhs) / (1.0 + std::abs(lhs) + std::abs(rhs)); }

/// Worst normalized slack over samples, with the witness described in the note.
struct SlackTracker {
  double worst = std::numeric_limits<double>::infinity();
  Point x{0.0, 0.0};
  double s = 0.0;
  Vec2 xi{0.0, 0.0};

  void update(double slack, const Point& at, double sv, const Vec2& xv) {
    if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
    if (slack < worst) {
      worst = slack;
      x = at;
      s = sv;
      xi = xv;
    }
  }

  Check check(std::string name, std::string box) const {
    Check c;
    c.name = std::move(name);
    c.margin = worst;
    c.passed = worst >= -1e-12;
    std::ostringstream note;
    note.precision(6);
    note << box << "; tightest at s=" << s << ", xi=(" << xi[0] << ", " << xi[1] << ")";
    c.note = note.str();
    if (!c.passed) c.witness = x;
    return c;
  }
};

/// Random (sample index, s, xi) triples in the box, preceded by the box extremes.
template <class Visit>
void sweep_box(const SampleSet& samples, const GrowthSampling& sampling, Visit visit) {
  const std::size_t n = samples.size();
  const bool planar = samples.mesh().dimension() == 2;
  const double sv[] = {-sampling.s_max, 0.0, sampling.s_max};
  std::vector<Vec2> xis{{0.0, 0.0}, {sampling.xi_max, 0.0}, {-sampling.xi_max, 0.0}};
  if (planar) {
    xis.push_back({0.0, sampling.xi_max});
    xis.push_back({sampling.xi_max / std::sqrt(2.0), -sampling.xi_max / std::sqrt(2.0)});
  }
  std::size_t combo = 0;
  for (double s : sv)
    for (const auto& xi : xis) {
      visit(0, s, xi);
      visit(n - 1, s, xi);
      visit((combo++ * 7919) % n, s, xi);
    }
  std::mt19937_64 rng(sampling.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t k = 0; k < sampling.budget; ++k) {
    const std::size_t idx = pick(rng);
    const double s = sampling.s_max * unit(rng);
    Vec2 xi{sampling.xi_max * unit(rng), 0.0};
    if (planar) xi[1] = sampling.xi_max * unit(rng);
    visit(idx, s, xi);
  }
}

std::string box_description(const GrowthSampling& sampling) {
  std::ostringstream out;
  out << "box |s| <= " << sampling.s_max << ", |xi_i| <= " << sampling.xi_max << ", " << sampling.budget << " samples";
  return out.str();
}

}  // namespace

HypothesisReport check_Hf(const ConvectionTerm& f, const CoefficientFields& fields, const SampleSet& samples,
                          int dimension, const GrowthSampling& sampling) {
  f.validate();
  if (!f.growth || !f.sign) throw InvalidInput("growth checks need declared growth and sign data");
  const auto p = samples.evaluate(fields.p);
  const auto r = samples.evaluate(f.growth->r);
  const auto alpha = samples.evaluate(f.growth->alpha);
  const auto omega = samples.evaluate(f.sign->omega);
  const double p_minus = sample_bounds(p).minus;
  const double n = static_cast<double>(dimension);
  const auto pts = samples.points();

  HypothesisReport report;
  report.hypothesis = "H(f)";
  Check range{"1<r<p*", true, std::numeric_limits<double>::infinity(), std::nullopt, false, ""};
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double p_star = p[k] < n ? n * p[k] / (n - p[k]) : std::numeric_limits<double>::infinity();
    const double slack = std::min(r[k] - 1.0, p_star - r[k]);
    if (!(slack >= range.margin)) {
      range.margin = slack;
      if (!(slack > 0.0)) range.witness = pts[k].x;
    }
  }
  range.passed = range.margin > 0.0;
  if (range.passed) range.witness.reset();
  report.add(range);

  const GrowthData& g = *f.growth;
  const SignData& sd = *f.sign;
  SlackTracker growth;
  SlackTracker sign;
  sweep_box(samples, sampling, [&](std::size_t k, double s, const Vec2& xi) {
    const Point& x = pts[k].x;
    const double value = f(x, s, xi);
    const double xn = norm(xi);
    const double as = std::abs(s);
    const double bound = g.a1 * std::pow(xn, p[k] * (r[k] - 1.0) / r[k]) + g.a2 * std::pow(as, r[k] - 1.0) + alpha[k];
    growth.update(normalized_slack(std::abs(value), bound), x, s, xi);
    const double sign_bound = sd.b1 * std::pow(xn, p[k]) + sd.b2 * std::pow(as, p_minus) + omega[k];
    sign.update(normalized_slack(value * s, sign_bound), x, s, xi);
  });
  const std::string box = box_description(sampling);
  report.add(growth.check("H(f)(i)", box));
  report.add(sign.check("H(f)(ii)", box));
  return report;
}

Eigen::VectorXd convection_load(const DoublePhaseModel& model, const DiscreteFunction& u, const ConvectionTerm& f) {
  require_mesh(u, model.mesh());
  return assemble_load(model, std::function<double(const QuadraturePoint&)>([&](const QuadraturePoint& qp) {
                         return f(qp.x, u.value(qp.element, qp.bary), u.gradient(qp.element));
                       }));
}

double weak_residual(const DoublePhaseModel& model, const DiscreteFunction& u, const ConvectionTerm& f) {
  require_mesh(u, model.mesh());
  return weak_residual_with(model, u, f, hat_norms(model));
}

SolveReport solve_monotone(const DoublePhaseModel& model, const Eigen::VectorXd& rhs, const SolverConfig& config,
                           const std::optional<DiscreteFunction>& initial) {
  if (!(config.tol > 0.0) || !(config.eps_reg > 0.0)) throw InvalidInput("solver tolerances must be positive");
  const auto& mesh = model.mesh_ptr();
  if (rhs.size() != mesh->num_free()) throw InvalidInput("right-hand side size does not match the free nodes");
  if (!rhs.allFinite()) throw InvalidInput("right-hand side is not finite");

  Eigen::VectorXd x;
  if (initial) {
    require_mesh(*initial, *mesh);
    x = initial->free_values();
  } else if (rhs.isZero(0.0)) {
    x = Eigen::VectorXd::Zero(mesh->num_free());
  } else {
    // Laplacian solve as a starting point.
    Eigen::SimplicialLDLT<SparseMatrix> laplace(stiffness_matrix(*mesh));
    x = laplace.solve(rhs);
    if (laplace.info() != Eigen::Success || !x.allFinite()) x = Eigen::VectorXd::Zero(mesh->num_free());
  }

  SolveReport report(DiscreteFunction::from_free(mesh, x));
  Eigen::VectorXd r = apply_A_basis(model, report.solution) - rhs;
  constexpr double kArmijo = 1e-4;
  for (;;) {
    const double rn = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
    report.residual_history.push_back(rn);
    report.merit_history.push_back(0.5 * r.squaredNorm());
    report.residual = rn;
    if (rn <= config.tol) break;
    if (report.newton_iterations >= config.max_newton)
      throw NumericError("Newton iteration cap reached; residual history: " + history_tail(report.residual_history));

    Eigen::SimplicialLDLT<SparseMatrix> solver(assemble_jacobian(model, report.solution, config.eps_reg));
    if (solver.info() != Eigen::Success)
      throw NumericError("singular Jacobian; a larger eps_reg may help");
    const Eigen::VectorXd delta = -solver.solve(r);
    if (solver.info() != Eigen::Success || !delta.allFinite())
      throw NumericError("singular Jacobian; a larger eps_reg may help");

    const double phi0 = 0.5 * r.squaredNorm();
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Eigen::VectorXd trial = x + t * delta;
      DiscreteFunction u_trial = DiscreteFunction::from_free(mesh, trial);
      Eigen::VectorXd r_trial = apply_A_basis(model, u_trial) - rhs;
      const double phi = 0.5 * r_trial.squaredNorm();
      if ((phi < phi0 && phi <= (1.0 - 2.0 * kArmijo * t) * phi0) || r_trial.lpNorm<Eigen::Infinity>() <= config.tol) {
        x = trial;
        report.solution = std::move(u_trial);
        r = std::move(r_trial);
        accepted = true;
        break;
      }
    }
    ++report.newton_iterations;
    if (!accepted)
      throw NumericError("Newton line search stagnated; residual history: " + history_tail(report.residual_history));
  }
  report.energy = energy_I(model, report.solution);
  return report;
}

SolveReport solve_convection(const DoublePhaseModel& model, const ConvectionTerm& f, const SolverConfig& config,
                             const std::optional<DiscreteFunction>& initial) {
  f.validate();
  if (!(config.outer_tol > 0.0) || !(config.theta > 0.0 && config.theta <= 1.0) || !(config.min_theta > 0.0))
    throw InvalidInput("invalid outer iteration settings");
  const auto& mesh = model.mesh_ptr();

  std::optional<double> coercivity;
  std::optional<double> uniqueness;
  if (f.sign) {
    const double p_minus = model.p_bounds().minus;
    const double lambda = first_eigenvalue(p_minus, mesh).lambda;
    coercivity = coercivity_margin(f.sign->b1, f.sign->b2, lambda);
    if (!(*coercivity > 0.0)) {
      std::ostringstream msg;
      msg << "coercivity margin " << *coercivity << " is not positive (lambda_1 = " << lambda << ")";
      throw PreconditionError(msg.str());
    }
  }
  if (f.uniqueness && model.p_bounds().minus == 2.0 && model.p_bounds().plus == 2.0) {
    const double lambda = first_eigenvalue(2.0, mesh).lambda;
    uniqueness = uniqueness_margin(f.uniqueness->c1, f.uniqueness->c2, lambda);
  }

  const std::vector<double> norms = hat_norms(model);
  int newton = 0;
  DiscreteFunction u = [&] {
    if (initial) {
      require_mesh(*initial, *mesh);
      if (!initial->vanishes_on_boundary()) throw InvalidInput("initial guess must vanish on the boundary");
      return *initial;
    }
    const SolveReport start = solve_monotone(model, convection_load(model, DiscreteFunction::zero(mesh), f), config);
    newton += start.newton_iterations;
    return start.solution;
  }();

  double residual = weak_residual_with(model, u, f, norms);
  std::vector<double> history{residual};
  double theta = config.theta;
  int outer = 0;
  for (;;) {
    if (outer >= config.max_outer)
      throw NumericError("Picard iteration cap reached; weak residual history: " + history_tail(history));
    ++outer;
    const SolveReport step = solve_monotone(model, convection_load(model, u, f), config, u);
    newton += step.newton_iterations;

    for (;;) {
      DiscreteFunction next = u.scaled(1.0 - theta) + step.solution.scaled(theta);
      const double next_residual = weak_residual_with(model, next, f, norms);
      const double change = gradient_norm(model, next - u);
      if (next_residual > residual && next_residual > config.tol) {
        theta *= 0.5;
        if (theta < config.min_theta)
          throw NumericError("Picard relaxation fell below the minimum; weak residual history: " + history_tail(history));
        continue;
      }
      u = std::move(next);
      residual = next_residual;
      history.push_back(residual);
      if (change <= config.outer_tol && residual <= config.tol) {
        SolveReport report(u);
        report.outer_iterations = outer;
        report.newton_iterations = newton;
        report.residual = residual;
        report.residual_history = std::move(history);
        report.coercivity_margin = coercivity;
        report.uniqueness_margin = uniqueness;
        report.energy = energy_I(model, u);
        return report;
      }
      break;
    }
  }
}

UniquenessReport verify_uniqueness(const DoublePhaseModel& model, const ConvectionTerm& f, const SolverConfig& config,
                                   const GrowthSampling& sampling) {
  f.validate();
  if (!f.uniqueness) throw InvalidInput("uniqueness check needs declared (c1, c2, rho)");
  if (model.p_bounds().minus != 2.0 || model.p_bounds().plus != 2.0)
    throw PreconditionError("uniqueness check requires p = 2 at every sample");
  const auto& mesh = model.mesh_ptr();
  const UniquenessData& ud = *f.uniqueness;

  UniquenessReport report;
  const EigenResult eig = first_eigenvalue(2.0, mesh);
  report.lambda_1_2 = eig.lambda;
  report.margin = uniqueness_margin(ud.c1, ud.c2, eig.lambda);
  if (!(report.margin > 0.0)) {
    std::ostringstream msg;
    msg << "uniqueness margin " << report.margin << " is not positive (lambda_1,2 = " << eig.lambda << ")";
    throw PreconditionError(msg.str());
  }

  // (U1) and (U2) on random samples.
  const SampleSet samples(mesh);
  const auto rho = samples.evaluate(ud.rho);
  const auto pts = samples.points();
  SlackTracker one_sided;
  SlackTracker lipschitz;
  SlackTracker linear;
  std::mt19937_64 rng(sampling.seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const bool planar = mesh->dimension() == 2;
  sweep_box(samples, sampling, [&](std::size_t k, double s, const Vec2& xi) {
    const Point& x = pts[k].x;
    const double t = sampling.s_max * unit(rng);
    Vec2 eta{sampling.xi_max * unit(rng), planar ? sampling.xi_max * unit(rng) : 0.0};
    const double a = unit(rng);
    const double fs = f(x, s, xi);
    one_sided.update(normalized_slack((fs - f(x, t, xi)) * (s - t), ud.c1 * (s - t) * (s - t)), x, s, xi);
    lipschitz.update(normalized_slack(std::abs(fs - f(x, s, eta)), ud.c2 * norm(xi - eta)), x, s, xi);
    const double g_xi = fs - rho[k];
    const double g_eta = f(x, s, eta) - rho[k];
    const double additive = f(x, s, xi + eta) - rho[k] - g_xi - g_eta;
    const double homogeneous = f(x, s, a * xi) - rho[k] - a * g_xi;
    const double scale = 1.0 + std::abs(g_xi) + std::abs(g_eta);
    linear.update(1e-10 - std::max(std::abs(additive), std::abs(homogeneous)) / scale, x, s, xi);
  });
  const std::string box = box_description(sampling);
  report.checks.hypothesis = "uniqueness";
  report.checks.add(one_sided.check("U1", box));
  report.checks.add(lipschitz.check("U2 lipschitz", box));
  Check lin = linear.check("U2 linear", box);
  lin.passed = linear.worst >= 0.0;
  if (lin.passed) lin.witness.reset();
  report.checks.add(lin);

  // Multi-start: zero, seeded random and a scaled eigenfunction.
  Eigen::VectorXd random(mesh->num_free());
  std::mt19937_64 start_rng(config.seed);
  for (Index i = 0; i < random.size(); ++i) random[i] = unit(start_rng);
  const std::vector<DiscreteFunction> starts{DiscreteFunction::zero(mesh), DiscreteFunction::from_free(mesh, random),
                                             eig.eigenfunction.scaled(5.0)};
  for (const auto& start : starts) report.solutions.push_back(solve_convection(model, f, config, start).solution);
  for (std::size_t i = 0; i < report.solutions.size(); ++i)
    for (std::size_t j = i + 1; j < report.solutions.size(); ++j)
      report.max_distance =
          std::max(report.max_distance, gradient_norm(model, report.solutions[i] - report.solutions[j]));

  Check agree{"multi-start agreement", report.max_distance <= config.match_tol, config.match_tol - report.max_distance,
              std::nullopt, false, "pairwise ||u - v||_{1,H,0}"};
  report.checks.add(agree);
  report.passed = report.checks.passed();
  return report;
}

}  // namespace dpkit
