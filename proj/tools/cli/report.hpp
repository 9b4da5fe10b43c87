#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "dpkit/hypotheses.hpp"

namespace dpkit::cli {

using Json = nlohmann::ordered_json;

/// Finite values as numbers; infinities and NaN as the strings "inf", "-inf" and "nan".
Json number(double value);
Json number_array(const std::vector<double>& values);
Json to_json(const Point& x, int dimension);
Json to_json(const Check& check, int dimension);
Json to_json(const HypothesisReport& report, int dimension);

/// Writes `report` to dir/report.json (creating dir), appending "generated_at" when `timestamp`.
void write_report(const std::filesystem::path& dir, Json report, bool timestamp);

}  // namespace dpkit::cli
