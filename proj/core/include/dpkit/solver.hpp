#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dpkit/convection.hpp"
#include "dpkit/hypotheses.hpp"
#include "dpkit/model.hpp"

namespace dpkit {

struct SolverConfig {
  double tol = 1e-10;        ///< residual max-norm for Newton, weak residual for Picard
  double eps_reg = 1e-8;
  int max_newton = 200;
  double outer_tol = 1e-10;  ///< ||u_{k+1} - u_k||_{1,H,0}
  int max_outer = 200;
  double theta = 1.0;
  double min_theta = 1.0 / 16.0;
  double match_tol = 1e-8;
  std::uint64_t seed = 20240601;
};

struct SolveReport {
  explicit SolveReport(DiscreteFunction u) : solution(std::move(u)) {}

  DiscreteFunction solution;
  int outer_iterations = 0;
  int newton_iterations = 0;
  /// Final residual: Newton max-norm for solve_monotone, weak residual for solve_convection.
  double residual = 0.0;
  std::vector<double> residual_history;
  /// 1/2 ||R||^2 after every accepted Newton step (solve_monotone only).
  std::vector<double> merit_history;
  HypothesisReport hypotheses;
  std::optional<double> coercivity_margin;
  std::optional<double> uniqueness_margin;
  double energy = 0.0;
};

/// Sampling box for the growth checks.
struct GrowthSampling {
  std::size_t budget = 10000;
  double s_max = 1e3;
  double xi_max = 1e3;
  std::uint64_t seed = 20240601;
};

/// Samples (x, s, xi) over the box and checks the declared growth and sign bounds, and r < p*.
/// Slacks are normalized by 1 + |lhs| + |rhs|.
HypothesisReport check_Hf(const ConvectionTerm& f, const CoefficientFields& fields, const SampleSet& samples,
                          int dimension, const GrowthSampling& sampling = {});

/// Solves A(u) = rhs (a functional given on the free nodes) by damped Newton with Armijo
/// backtracking on 1/2 ||R||^2. Throws NumericError on stagnation or a singular Jacobian.
SolveReport solve_monotone(const DoublePhaseModel& model, const Eigen::VectorXd& rhs, const SolverConfig& config = {},
                           const std::optional<DiscreteFunction>& initial = std::nullopt);

/// Picard iteration on the convection term with a Newton solve per step. The coercivity margin
/// is computed when sign data are declared; a non-positive margin raises PreconditionError.
/// Without an initial guess the iteration starts from the solve with f(x, 0, 0).
SolveReport solve_convection(const DoublePhaseModel& model, const ConvectionTerm& f, const SolverConfig& config = {},
                             const std::optional<DiscreteFunction>& initial = std::nullopt);

/// max_i |<A(u), phi_i> - int f(x, u, grad u) phi_i| / (1 + ||phi_i||_{1,H,0}).
double weak_residual(const DoublePhaseModel& model, const DiscreteFunction& u, const ConvectionTerm& f);

/// Values f(x, u, grad u) integrated against the basis.
Eigen::VectorXd convection_load(const DoublePhaseModel& model, const DiscreteFunction& u, const ConvectionTerm& f);

struct UniquenessReport {
  double margin = 0.0;
  double lambda_1_2 = 0.0;
  std::vector<DiscreteFunction> solutions;
  double max_distance = 0.0;  ///< pairwise, in ||.||_{1,H,0}
  HypothesisReport checks;
  bool passed = true;
};

/// Multi-start uniqueness check for p = 2. Throws PreconditionError when p is not identically 2
/// or the uniqueness margin is not positive, InvalidInput without declared uniqueness data.
UniquenessReport verify_uniqueness(const DoublePhaseModel& model, const ConvectionTerm& f,
                                   const SolverConfig& config = {}, const GrowthSampling& sampling = {});

}  // namespace dpkit
