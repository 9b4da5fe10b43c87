#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "dpkit/expression.hpp"
#include "dpkit/io.hpp"

namespace dpkit::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const std::string& key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + " must be finite");
  return x;
}

double required_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing " + where + "." + key);
  return number(obj, key, 0.0, where);
}

Index count(const json& obj, const std::string& key, std::optional<Index> fallback, const std::string& where) {
  if (!obj.contains(key)) {
    if (!fallback) throw ConfigError("missing " + where + "." + key);
    return *fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError(where + "." + key + " must be a positive integer");
  return static_cast<Index>(v.get<long long>());
}

std::string text(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing " + where + "." + key);
  if (!obj.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return obj.at(key).get<std::string>();
}

std::array<double, 2> range(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return {0.0, 1.0};
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(where + "." + key + " must be a pair of numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::shared_ptr<const Mesh> parse_mesh(const json& j, const fs::path& base) {
  const std::string where = "mesh";
  if (!j.is_object()) throw ConfigError("mesh must be an object");
  const std::string kind = text(j, "kind", where);
  if (kind == "interval") {
    require_keys(j, {"kind", "a", "b", "n"}, where);
    return std::make_shared<const Mesh>(
        build_interval_mesh(number(j, "a", 0.0, where), number(j, "b", 1.0, where), count(j, "n", std::nullopt, where)));
  }
  if (kind == "rect") {
    require_keys(j, {"kind", "x", "y", "n", "nx", "ny"}, where);
    const Index n = count(j, "n", Index{16}, where);
    return std::make_shared<const Mesh>(build_rect_mesh(range(j, "x", where), range(j, "y", where),
                                                        count(j, "nx", n, where), count(j, "ny", n, where)));
  }
  if (kind == "csv") {
    require_keys(j, {"kind", "dir"}, where);
    return std::make_shared<const Mesh>(read_mesh_csv(resolve(base, text(j, "dir", where))));
  }
  throw ConfigError("unknown mesh kind '" + kind + "'");
}

ExponentField expression_field(const std::string& source, const std::string& where) {
  auto e = Expression::parse(source);
  for (const char* id : {"s", "xi1", "xi2"})
    if (e.uses(id)) throw ConfigError(where + ": a field expression may only use x and y");
  return ExponentField::callback([e](const Point& x) { return e({x[0], x[1], 0.0, 0.0, 0.0}); }, source);
}

ExponentField parse_field(const json& j, const std::shared_ptr<const Mesh>& mesh, const fs::path& base,
                          const std::string& where) {
  if (j.is_number()) return ExponentField::constant(j.get<double>());
  if (j.is_string()) return expression_field(j.get<std::string>(), where);
  if (!j.is_object()) throw ConfigError(where + " must be a number, a string or an object");
  const std::string kind = text(j, "kind", where);
  if (kind == "constant") {
    require_keys(j, {"kind", "value"}, where);
    return ExponentField::constant(required_number(j, "value", where));
  }
  if (kind == "affine") {
    require_keys(j, {"kind", "a", "b"}, where);
    Vec2 a{0.0, 0.0};
    if (j.contains("a")) {
      const json& v = j.at("a");
      if (!v.is_array() || v.empty() || v.size() > 2) throw ConfigError(where + ".a must be an array of 1 or 2 numbers");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(where + ".a must hold numbers");
        a[i] = v[i].get<double>();
      }
    }
    return ExponentField::affine(a, number(j, "b", 0.0, where));
  }
  if (kind == "table") {
    require_keys(j, {"kind", "path"}, where);
    if (!mesh) throw ConfigError(where + ": a table field needs a mesh");
    return read_field_table(resolve(base, text(j, "path", where)), mesh);
  }
  if (kind == "expression") {
    require_keys(j, {"kind", "expr"}, where);
    return expression_field(text(j, "expr", where), where);
  }
  throw ConfigError("unknown field kind '" + kind + "' in " + where);
}

CoefficientFields parse_fields(const json& j, const std::shared_ptr<const Mesh>& mesh, const fs::path& base) {
  require_keys(j, {"p", "q", "mu"}, "fields");
  CoefficientFields f;
  for (const char* name : {"p", "q", "mu"})
    if (!j.contains(name)) throw ConfigError(std::string("missing field spec 'fields.") + name + "'");
  f.p = parse_field(j.at("p"), mesh, base, "fields.p");
  f.q = parse_field(j.at("q"), mesh, base, "fields.q");
  f.mu = parse_field(j.at("mu"), mesh, base, "fields.mu");
  return f;
}

ManufacturedCase parse_custom_problem(const json& j, const std::shared_ptr<const Mesh>& mesh, const fs::path& base) {
  require_keys(j, {"f", "exact", "growth", "sign", "uniqueness"}, "problem");
  ManufacturedCase c;
  c.name = "custom";
  c.mesh_dimension = mesh ? mesh->dimension() : 1;
  const auto f = Expression::parse(text(j, "f", "problem"));
  c.f.f = [f](const Point& x, double s, const Vec2& xi) { return f({x[0], x[1], s, xi[0], xi[1]}); };
  c.f.label = f.text();
  auto field = [&](const json& obj, const char* key, double fallback, const std::string& where) {
    return obj.contains(key) ? parse_field(obj.at(key), mesh, base, where + "." + key) : ExponentField::constant(fallback);
  };
  if (j.contains("growth")) {
    const json& g = j.at("growth");
    require_keys(g, {"a1", "a2", "alpha", "r"}, "problem.growth");
    c.f.growth = GrowthData{number(g, "a1", 0.0, "problem.growth"), number(g, "a2", 0.0, "problem.growth"),
                            field(g, "alpha", 0.0, "problem.growth"), field(g, "r", 2.0, "problem.growth")};
  }
  if (j.contains("sign")) {
    const json& s = j.at("sign");
    require_keys(s, {"b1", "b2", "omega"}, "problem.sign");
    c.f.sign = SignData{number(s, "b1", 0.0, "problem.sign"), number(s, "b2", 0.0, "problem.sign"),
                        field(s, "omega", 0.0, "problem.sign")};
  }
  if (j.contains("uniqueness")) {
    const json& u = j.at("uniqueness");
    require_keys(u, {"c1", "c2", "rho"}, "problem.uniqueness");
    c.f.uniqueness = UniquenessData{number(u, "c1", 0.0, "problem.uniqueness"), number(u, "c2", 0.0, "problem.uniqueness"),
                                    field(u, "rho", 0.0, "problem.uniqueness")};
  }
  c.f.validate();
  if (j.contains("exact")) {
    const auto e = Expression::parse(text(j, "exact", "problem"));
    c.exact = [e](const Point& x) { return e({x[0], x[1], 0.0, 0.0, 0.0}); };
  }
  return c;
}

}  // namespace

const Mesh& RunConfig::require_mesh() const {
  if (!mesh) throw ConfigError("the configuration has no mesh");
  return *mesh;
}

const CoefficientFields& RunConfig::require_fields() const {
  if (!fields) throw ConfigError("missing field spec: the configuration declares neither fields nor a named problem");
  return *fields;
}

const ManufacturedCase& RunConfig::require_problem() const {
  if (!problem) throw ConfigError("the configuration has no problem");
  return *problem;
}

RunConfig parse_config(const json& doc, const fs::path& base) {
  require_keys(doc,
               {"mesh", "N", "fields", "problem", "tolerances", "quadrature_order", "eps_reg", "seed", "output_dir",
                "eigen", "validate", "convergence"},
               "configuration");
  RunConfig cfg;

  const json* problem = doc.contains("problem") ? &doc.at("problem") : nullptr;
  if (problem && problem->is_object() && problem->contains("name")) {
    require_keys(*problem, {"name", "beta"}, "problem");
    const std::string name = text(*problem, "name", "problem");
    if (problem->contains("beta")) {
      if (name != "convection-linear") throw ConfigError("problem.beta applies to convection-linear only");
      cfg.problem = convection_linear_case(number(*problem, "beta", 0.9, "problem"));
    } else {
      cfg.problem = manufactured_case(name);
    }
    cfg.named_problem = true;
    cfg.dimension = cfg.problem->hypothesis_dimension;
  } else if (problem && !problem->is_object()) {
    throw ConfigError("problem must be an object");
  }

  if (doc.contains("mesh")) {
    const json& m = doc.at("mesh");
    if (cfg.named_problem && m.is_object() && !m.contains("kind")) {
      require_keys(m, {"n"}, "mesh");
      cfg.mesh = case_mesh(*cfg.problem, count(m, "n", std::nullopt, "mesh"));
    } else {
      cfg.mesh = parse_mesh(m, base);
    }
  } else if (cfg.named_problem) {
    cfg.mesh = case_mesh(*cfg.problem, 64);
  }

  if (doc.contains("fields")) {
    cfg.fields = parse_fields(doc.at("fields"), cfg.mesh, base);
    if (cfg.problem) cfg.problem->fields = *cfg.fields;
  } else if (cfg.problem) {
    cfg.fields = cfg.problem->fields;
  }

  if (problem && !cfg.named_problem) {
    cfg.problem = parse_custom_problem(*problem, cfg.mesh, base);
    if (cfg.fields) cfg.problem->fields = *cfg.fields;
  }

  if (doc.contains("N")) {
    const json& n = doc.at("N");
    if (!n.is_number_integer() || n.get<long long>() < 1) throw ConfigError("N must be a positive integer");
    cfg.dimension = static_cast<int>(n.get<long long>());
  }

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    require_keys(t, {"norm_tol", "newton_tol", "outer_tol", "eigen_tol"}, "tolerances");
    cfg.tol.norm = number(t, "norm_tol", cfg.tol.norm, "tolerances");
    cfg.tol.newton = number(t, "newton_tol", cfg.tol.newton, "tolerances");
    cfg.tol.outer = number(t, "outer_tol", cfg.tol.outer, "tolerances");
    cfg.tol.eigen = number(t, "eigen_tol", cfg.tol.eigen, "tolerances");
    for (double v : {cfg.tol.norm, cfg.tol.newton, cfg.tol.outer, cfg.tol.eigen})
      if (!(v > 0.0)) throw ConfigError("all tolerances must be positive");
  }

  if (doc.contains("quadrature_order"))
    cfg.quadrature_order = static_cast<int>(count(doc, "quadrature_order", std::nullopt, "configuration"));
  cfg.eps_reg = number(doc, "eps_reg", cfg.eps_reg, "configuration");
  if (!(cfg.eps_reg > 0.0)) throw ConfigError("eps_reg must be positive");
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) cfg.output_dir = resolve(base, text(doc, "output_dir", "configuration"));

  if (doc.contains("eigen")) {
    const json& e = doc.at("eigen");
    require_keys(e, {"r"}, "eigen");
    cfg.eigen_r = number(e, "r", cfg.eigen_r, "eigen");
  }
  if (doc.contains("validate")) {
    const json& v = doc.at("validate");
    require_keys(v, {"alpha", "pair_budget"}, "validate");
    cfg.alpha = number(v, "alpha", cfg.alpha, "validate");
    cfg.pair_budget = static_cast<std::size_t>(count(v, "pair_budget", static_cast<Index>(cfg.pair_budget), "validate"));
  }
  if (doc.contains("convergence")) {
    const json& c = doc.at("convergence");
    require_keys(c, {"levels"}, "convergence");
    const json& levels = c.at("levels");
    if (!levels.is_array() || levels.empty()) throw ConfigError("convergence.levels must be a non-empty array");
    cfg.levels.clear();
    for (const json& n : levels) {
      if (!n.is_number_integer() || n.get<long long>() < 1)
        throw ConfigError("convergence.levels must hold positive integers");
      cfg.levels.push_back(static_cast<Index>(n.get<long long>()));
    }
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed configuration '" + path.string() + "': " + e.what());
  }
  return parse_config(doc, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

}  // namespace dpkit::cli
