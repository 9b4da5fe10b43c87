#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpkit/hypotheses.hpp"
#include "dpkit/manufactured.hpp"
#include "dpkit/mesh.hpp"
#include "dpkit/quadrature.hpp"

namespace dpkit::cli {

/// Malformed or incomplete run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double norm = 1e-12;
  double newton = 1e-10;
  double outer = 1e-10;
  double eigen = 1e-10;
};

struct RunConfig {
  std::shared_ptr<const Mesh> mesh;
  std::optional<CoefficientFields> fields;
  /// Named case or a term read from expressions; `exact` is set only when known.
  std::optional<ManufacturedCase> problem;
  bool named_problem = false;
  int dimension = 3;  ///< N for the hypothesis checks
  Tolerances tol;
  int quadrature_order = kDefaultQuadratureOrder;
  double eps_reg = 1e-8;
  std::uint64_t seed = 20240601;
  std::filesystem::path output_dir = "dpkit-out";
  double eigen_r = 2.0;
  double alpha = 1.0;  ///< Hoelder exponent for the sufficient (A1) check
  std::size_t pair_budget = 20000;
  std::vector<Index> levels{32, 64, 128, 256};

  const Mesh& require_mesh() const;
  const CoefficientFields& require_fields() const;
  const ManufacturedCase& require_problem() const;
};

/// Relative paths are resolved against `base_dir`.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace dpkit::cli
