#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>

#include <Eigen/SparseCore>

#include "dpkit/model.hpp"

namespace dpkit {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr double kDefaultRegularization = 1e-8;

/// Galerkin residual over the free nodes and, optionally, the regularized Jacobian.
struct OperatorAssembly {
  Eigen::VectorXd residual;
  std::optional<SparseMatrix> jacobian;
  double eps_reg = kDefaultRegularization;
};

/// int |grad u|^p / p + mu |grad u|^q / q.
double energy_I(const DoublePhaseModel& model, const DiscreteFunction& u);
/// <A(u), v> = int (|grad u|^{p-2} + mu |grad u|^{q-2}) grad u . grad v.
double apply_A(const DoublePhaseModel& model, const DiscreteFunction& u, const DiscreteFunction& v);
/// <A(u), phi_i> for every free node i.
Eigen::VectorXd apply_A_basis(const DoublePhaseModel& model, const DiscreteFunction& u);

/// <A(u), v> + int (|u|^{p-2} + mu |u|^{q-2}) u v.
double apply_B(const DoublePhaseModel& model, const DiscreteFunction& u, const DiscreteFunction& v);
/// energy_I plus int |u|^p / p + mu |u|^q / q.
double energy_J(const DoublePhaseModel& model, const DiscreteFunction& u);

/// int g phi_i over the free nodes, with g evaluated at the model quadrature points.
Eigen::VectorXd assemble_load(const DoublePhaseModel& model, const std::function<double(const QuadraturePoint&)>& g);
Eigen::VectorXd assemble_load(const DoublePhaseModel& model, const std::function<double(const Point&)>& f);

/// residual_i = <A(u), phi_i> - rhs_i. Throws InvalidInput on size or mesh mismatch.
OperatorAssembly assemble_residual(const DoublePhaseModel& model, const DiscreteFunction& u,
                                   const Eigen::VectorXd& rhs);
/// Residual together with the Jacobian.
OperatorAssembly assemble_system(const DoublePhaseModel& model, const DiscreteFunction& u, const Eigen::VectorXd& rhs,
                                 double eps_reg = kDefaultRegularization);

/// Derivative of the residual with |grad u| replaced by (|grad u|^2 + eps_reg^2)^{1/2} inside
/// the p-2 and q-2 powers. Throws InvalidInput unless eps_reg > 0.
SparseMatrix assemble_jacobian(const DoublePhaseModel& model, const DiscreteFunction& u,
                               double eps_reg = kDefaultRegularization);

/// P1 Laplacian stiffness and consistent mass matrices on the free nodes.
SparseMatrix stiffness_matrix(const Mesh& mesh);
SparseMatrix mass_matrix(const Mesh& mesh);

/// One "row col value" line per stored entry, 17 significant digits.
void export_coo(std::ostream& out, const SparseMatrix& matrix);

/// |(I(u + eps h) - I(u - eps h)) / (2 eps) - <A(u), h>| / (1 + |<A(u), h>|).
double gradient_check(const DoublePhaseModel& model, const DiscreteFunction& u, const DiscreteFunction& h, double eps);

/// <A(u) - A(v), u - v>.
double monotonicity_probe(const DoublePhaseModel& model, const DiscreteFunction& u, const DiscreteFunction& v);

/// 5^{(2-p)/2}
double simon_constant_lower(double p);
/// (p-1) 2^{(p-1)(p-2)/p}
double simon_constant_upper(double p);

struct SimonResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = true;
};

/// For p >= 2: c_p |xi - eta|^p <= (|xi|^{p-2} xi - |eta|^{p-2} eta).(xi - eta).
/// For 1 <= p < 2: C_p |xi - eta|^2 <= (...).(xi - eta) (|xi|^p + |eta|^p)^{(2-p)/p}.
/// The tolerance is relative to max(1, |rhs|). Throws InvalidInput for p < 1.
SimonResult simon_inequality_check(const Vec2& xi, const Vec2& eta, double p, double tol = 1e-12);

struct BoundednessEstimate {
  double dual_norm_bound = 0.0;
  /// Max of |<A(u), v>| / ||v|| over the test set: a lower bound of the dual norm.
  double empirical_sup = 0.0;
  std::size_t directions = 0;
  bool passed = true;
};

/// Compares (q+/p-) max(||u||^{q+-1}, ||u||^{p--1}) with |<A(u), v>| / ||v|| over all basis
/// hats, `random_directions` seeded random v and v = u.
BoundednessEstimate boundedness_estimate(const DoublePhaseModel& model, const DiscreteFunction& u,
                                         std::uint64_t seed = 7, std::size_t random_directions = 100);

}  // namespace dpkit
