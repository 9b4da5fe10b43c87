#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dpkit::cli {

struct PropertyResult {
  std::string module;
  std::string name;
  bool passed = true;
  double value = 0.0;  ///< the worst observed quantity
  std::string detail;  ///< what `value` measures and the bound it is held to
};

/// Runs every invariant of the library on seeded samples. Deterministic for a fixed seed.
std::vector<PropertyResult> run_catalogue(std::uint64_t seed);

}  // namespace dpkit::cli
