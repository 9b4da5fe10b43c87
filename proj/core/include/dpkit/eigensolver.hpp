#pragma once

#include <memory>
#include <vector>

#include "dpkit/function.hpp"

namespace dpkit {

struct EigenResult {
  double lambda = 0.0;
  /// Positive on free nodes, normalized so that int |u|^r = 1.
  DiscreteFunction eigenfunction;
  int iterations = 0;
  /// Rayleigh quotient after every iteration.
  std::vector<double> history;
};

struct EigenOptions {
  double tol = 1e-10;  ///< relative change of the Rayleigh quotient
  int max_iterations = 500;
  int quadrature_order = 4;
  double newton_tol = 1e-12;  ///< inner solves for r != 2
};

/// First Dirichlet eigenvalue of the r-Laplacian, inf int |grad u|^r / int |u|^r.
///
/// r = 2 runs inverse power iteration on the stiffness/mass pencil; other r run normalized
/// inverse iteration with a Newton solve of the r-Laplacian per step. Throws InvalidInput for
/// r <= 1 or a mesh without free nodes and NumericError when the iteration cap is reached.
EigenResult first_eigenvalue(double r, std::shared_ptr<const Mesh> mesh, const EigenOptions& options = {});

/// 1 - b1 - b2 / lambda. Throws InvalidInput for negative b or lambda <= 0.
double coercivity_margin(double b1, double b2, double lambda_1_pminus);
/// 1 - (c1 / lambda + c2 / sqrt(lambda)). Throws InvalidInput for negative c or lambda <= 0.
double uniqueness_margin(double c1, double c2, double lambda_1_2);

}  // namespace dpkit
