#include "report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "dpkit/errors.hpp"

namespace dpkit::cli {

Json number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
  return value;
}

Json number_array(const std::vector<double>& values) {
  Json a = Json::array();
  for (double v : values) a.push_back(number(v));
  return a;
}

Json to_json(const Point& x, int dimension) {
  Json a = Json::array();
  for (int i = 0; i < dimension; ++i) a.push_back(number(x[static_cast<std::size_t>(i)]));
  return a;
}

Json to_json(const Check& check, int dimension) {
  Json j;
  j["name"] = check.name;
  j["passed"] = check.passed;
  j["margin"] = number(check.margin);
  j["witness"] = check.witness ? to_json(*check.witness, dimension) : Json(nullptr);
  if (check.lower_bound) j["lower_bound"] = true;
  if (!check.note.empty()) j["note"] = check.note;
  return j;
}

Json to_json(const HypothesisReport& report, int dimension) {
  Json j;
  j["hypothesis"] = report.hypothesis;
  j["passed"] = report.passed();
  Json checks = Json::array();
  for (const Check& c : report.checks) checks.push_back(to_json(c, dimension));
  j["checks"] = std::move(checks);
  return j;
}

void write_report(const std::filesystem::path& dir, Json report, bool timestamp) {
  std::filesystem::create_directories(dir);
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    report["generated_at"] = buffer;
  }
  std::ofstream out(dir / "report.json");
  if (!out) throw InvalidInput("cannot write " + (dir / "report.json").string());
  out << report.dump(2) << '\n';
}

}  // namespace dpkit::cli
