#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dpkit/convection.hpp"
#include "dpkit/hypotheses.hpp"

namespace dpkit {

/// A fully specified test problem on the unit interval or the unit square.
struct ManufacturedCase {
  std::string name;
  int mesh_dimension = 1;
  int hypothesis_dimension = 3;  ///< N used for the hypothesis checks
  CoefficientFields fields;
  ConvectionTerm f;
  std::optional<std::function<double(const Point&)>> exact;
};

/// Registered names: poisson-1d, poisson-2d, dp-1d, convection-linear.
std::vector<std::string> manufactured_names();

/// Throws InvalidInput for an unknown name.
ManufacturedCase manufactured_case(const std::string& name);

/// The linear convection example f(x, xi) = beta xi_1 + rho on (0, 1) with p = 2, q = 3,
/// mu(x) = x and rho = 1. Declared constants: c1 = 0, c2 = |beta|.
ManufacturedCase convection_linear_case(double beta);

/// Uniform mesh of the case domain with n cells per direction.
std::shared_ptr<const Mesh> case_mesh(const ManufacturedCase& c, Index n);

}  // namespace dpkit
