#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "catalogue.hpp"
#include "config.hpp"
#include "dpkit/eigensolver.hpp"
#include "dpkit/errors.hpp"
#include "dpkit/io.hpp"
#include "dpkit/modular.hpp"
#include "dpkit/operator.hpp"
#include "dpkit/parallel.hpp"
#include "dpkit/solver.hpp"
#include "report.hpp"

namespace dpkit::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string config;
  std::string out;
  bool no_timestamp = false;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> checks;
  std::string function;
  std::string kind = "values";
  std::optional<double> r;
  bool vtk = false;
  std::vector<Index> levels;
};

struct Context {
  RunConfig cfg;
  fs::path out_dir;
  bool timestamp = true;
  std::ostream& out;
};

Json header(const std::string& command, const Context& ctx) {
  Json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["seed"] = ctx.cfg.seed;
  return j;
}

Json mesh_summary(const Mesh& mesh) {
  Json j;
  j["dimension"] = mesh.dimension();
  j["nodes"] = mesh.num_nodes();
  j["elements"] = mesh.num_elements();
  return j;
}

std::string format_point(const Point& x, int dimension) {
  std::ostringstream s;
  s << std::setprecision(6) << "(" << x[0];
  if (dimension == 2) s << ", " << x[1];
  s << ")";
  return s.str();
}

void print_report(std::ostream& out, const HypothesisReport& report, int dimension) {
  out << std::left << std::setw(24) << report.hypothesis << (report.passed() ? "pass" : "FAIL") << '\n';
  for (const Check& c : report.checks) {
    if (c.passed) continue;
    out << "  " << c.name << " violated, margin " << std::setprecision(6) << c.margin;
    if (c.witness) out << " at " << format_point(*c.witness, dimension);
    out << '\n';
  }
}

std::string canonical_check(const std::string& name) {
  if (name == "base") return "base";
  if (name == "H") return "H";
  if (name == "H'" || name == "Hprime") return "H'";
  if (name == "H''" || name == "Hdoubleprime") return "H''";
  if (name == "A1") return "A1";
  if (name == "density") return "density";
  throw ConfigError("unknown hypothesis '" + name + "' (expected base, H, H', H'', A1, density or all)");
}

int cmd_validate(Context& ctx, const Options& opt) {
  const RunConfig& cfg = ctx.cfg;
  const CoefficientFields& fields = cfg.require_fields();
  const Mesh& mesh = cfg.require_mesh();
  std::vector<std::string> requested;
  for (const std::string& c : opt.checks.empty() ? std::vector<std::string>{"all"} : opt.checks) {
    if (c == "all") {
      requested.insert(requested.end(), {"base", "H", "H'", "H''", "A1", "density"});
    } else {
      requested.push_back(canonical_check(c));
    }
  }

  const SampleSet samples(cfg.mesh, Quadrature(mesh.dimension(), cfg.quadrature_order));
  const PairSampling sampling{cfg.pair_budget, cfg.seed};
  const int dim = mesh.dimension();
  Json reports = Json::array();
  bool passed = true;
  for (const std::string& name : requested) {
    std::vector<HypothesisReport> parts;
    Json extra;
    if (name == "base") parts.push_back(check_condition_base(fields, samples, cfg.dimension));
    if (name == "H") parts.push_back(check_condition_H(fields, samples, cfg.dimension));
    if (name == "H'") parts.push_back(check_condition_Hprime(fields, samples, cfg.dimension, false, sampling));
    if (name == "H''") parts.push_back(check_condition_Hdoubleprime(fields, samples, sampling));
    if (name == "density") parts.push_back(check_density(fields, samples, cfg.dimension, sampling));
    if (name == "A1") {
      const auto ch = check_A1_characterization(fields, samples, cfg.dimension, cfg.pair_budget, cfg.seed);
      parts.push_back(ch.report);
      extra["beta_max"] = number(ch.beta_max);
      extra["pairs"] = ch.pairs;
      // the sufficient condition is informational: A1 may hold without it
      auto sufficient = check_A1_sufficient(fields, samples, cfg.dimension, cfg.alpha, sampling);
      sufficient.hypothesis = "A1 (sufficient)";
      extra["sufficient"] = to_json(sufficient, dim);
    }
    const bool ok = parts.front().passed();
    passed = passed && ok;
    Json j = to_json(parts.front(), dim);
    j["requested"] = name;
    for (auto& [k, v] : extra.items()) j[k] = v;
    reports.push_back(std::move(j));
    print_report(ctx.out, parts.front(), dim);
  }

  Json report = header("validate", ctx);
  report["N"] = cfg.dimension;
  report["mesh"] = mesh_summary(mesh);
  report["samples"] = samples.size();
  report["reports"] = std::move(reports);
  report["passed"] = passed;
  write_report(ctx.out_dir, std::move(report), ctx.timestamp);
  return passed ? kExitOk : kExitCheckFailed;
}

ModularKind parse_kind(const std::string& kind) {
  if (kind == "values") return ModularKind::values;
  if (kind == "gradients") return ModularKind::gradients;
  if (kind == "combined") return ModularKind::combined;
  throw ConfigError("unknown norm kind '" + kind + "' (expected values, gradients or combined)");
}

Json modular_json(const ModularReport& m) {
  Json j;
  j["total"] = number(m.total);
  j["p_part"] = number(m.p_part);
  j["q_part"] = number(m.q_part);
  if (m.kind == ModularKind::combined) {
    j["gradient_p"] = number(m.gradient_p);
    j["gradient_q"] = number(m.gradient_q);
    j["value_p"] = number(m.value_p);
    j["value_q"] = number(m.value_q);
  }
  return j;
}

int cmd_norm(Context& ctx, const Options& opt) {
  const RunConfig& cfg = ctx.cfg;
  if (opt.function.empty()) throw ConfigError("norm needs --function <csv>");
  (void)cfg.require_mesh();
  const DoublePhaseModel model(cfg.mesh, cfg.require_fields(), cfg.quadrature_order);
  const auto u = read_function_csv(opt.function, cfg.mesh);
  const ModularKind kind = parse_kind(opt.kind);

  const NormResult norm = luxemburg_norm(model, u, kind, cfg.tol.norm);
  const NormResult semi = seminorm_mu(model, u, cfg.tol.norm);
  Json report = header("norm", ctx);
  report["kind"] = to_string(kind);
  report["norm"] = number(norm.norm);
  report["iterations"] = norm.iterations;
  report["unit_ball_residual"] = number(norm.residual);
  report["modular"] = modular_json(modular(model, u, kind));
  report["seminorm_mu"] = number(semi.norm);
  ctx.out << "norm " << std::setprecision(17) << norm.norm << " (" << norm.iterations << " bisection steps)\n";
  write_report(ctx.out_dir, std::move(report), ctx.timestamp);
  return kExitOk;
}

int cmd_eigen(Context& ctx, const Options& opt) {
  const RunConfig& cfg = ctx.cfg;
  const double r = opt.r.value_or(cfg.eigen_r);
  EigenOptions options;
  options.tol = cfg.tol.eigen;
  options.quadrature_order = cfg.quadrature_order;
  (void)cfg.require_mesh();
  const EigenResult res = first_eigenvalue(r, cfg.mesh, options);

  Json report = header("eigen", ctx);
  report["mesh"] = mesh_summary(*cfg.mesh);
  report["r"] = number(r);
  report["lambda"] = number(res.lambda);
  report["iterations"] = res.iterations;
  report["history"] = number_array(res.history);
  fs::create_directories(ctx.out_dir);
  write_solution_csv(ctx.out_dir / "eigenfunction.csv", res.eigenfunction);
  ctx.out << "lambda_1," << r << " = " << std::setprecision(17) << res.lambda << " (" << res.iterations
          << " iterations)\n";
  write_report(ctx.out_dir, std::move(report), ctx.timestamp);
  return kExitOk;
}

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.tol = cfg.tol.newton;
  s.outer_tol = cfg.tol.outer;
  s.eps_reg = cfg.eps_reg;
  s.seed = cfg.seed;
  return s;
}

double l2_error(const DiscreteFunction& u, const std::function<double(const Point&)>& exact) {
  return std::sqrt(integrate(u.mesh(), Quadrature(u.mesh().dimension(), 6), [&](const QuadraturePoint& p) {
    const double d = u.value(p.element, p.bary) - exact(p.x);
    return d * d;
  }));
}

double max_nodal_error(const DiscreteFunction& u, const std::function<double(const Point&)>& exact) {
  double m = 0.0;
  for (Index i = 0; i < u.mesh().num_nodes(); ++i) m = std::max(m, std::abs(u.coefficient(i) - exact(u.mesh().node(i))));
  return m;
}

int cmd_solve(Context& ctx, const Options& opt) {
  const RunConfig& cfg = ctx.cfg;
  const ManufacturedCase& problem = cfg.require_problem();
  const CoefficientFields& fields = cfg.require_fields();
  const Mesh& mesh = cfg.require_mesh();
  const int dim = mesh.dimension();
  const DoublePhaseModel model(cfg.mesh, fields, cfg.quadrature_order);

  const SampleSet samples(cfg.mesh, Quadrature(dim, cfg.quadrature_order));
  HypothesisReport hypotheses = check_condition_H(fields, samples, cfg.dimension);
  std::optional<HypothesisReport> growth;
  if (problem.f.growth || problem.f.sign) {
    GrowthSampling sampling;
    sampling.seed = cfg.seed;
    growth = check_Hf(problem.f, fields, samples, cfg.dimension, sampling);
  }

  const SolveReport result = solve_convection(model, problem.f, solver_config(cfg));
  const double residual = weak_residual(model, result.solution, problem.f);

  Json report = header("solve", ctx);
  report["problem"] = problem.name;
  report["term"] = problem.f.label;
  report["mesh"] = mesh_summary(mesh);
  report["hypotheses"] = Json::array({to_json(hypotheses, dim)});
  if (growth) report["hypotheses"].push_back(to_json(*growth, dim));
  report["outer_iterations"] = result.outer_iterations;
  report["newton_iterations"] = result.newton_iterations;
  report["residual"] = number(result.residual);
  report["weak_residual"] = number(residual);
  report["residual_history"] = number_array(result.residual_history);
  report["coercivity_margin"] = result.coercivity_margin ? number(*result.coercivity_margin) : Json(nullptr);
  report["uniqueness_margin"] = result.uniqueness_margin ? number(*result.uniqueness_margin) : Json(nullptr);
  report["energy"] = number(result.energy);
  report["gradient_norm"] = number(gradient_norm(model, result.solution, cfg.tol.norm));
  if (problem.exact) {
    Json errors;
    errors["l2"] = number(l2_error(result.solution, *problem.exact));
    errors["max_nodal"] = number(max_nodal_error(result.solution, *problem.exact));
    report["errors"] = std::move(errors);
  }

  fs::create_directories(ctx.out_dir);
  write_solution_csv(ctx.out_dir / "solution.csv", result.solution);
  write_mesh_csv(ctx.out_dir / "mesh", mesh);
  if (opt.vtk) write_vtk(ctx.out_dir / "solution.vtk", result.solution, "u");

  ctx.out << "solved " << problem.name << ": " << result.outer_iterations << " outer, " << result.newton_iterations
          << " newton iterations, weak residual " << std::setprecision(3) << residual << '\n';
  if (problem.exact)
    ctx.out << "  L2 error " << std::setprecision(6) << report["errors"]["l2"].get<double>() << ", max nodal error "
            << report["errors"]["max_nodal"].get<double>() << '\n';
  write_report(ctx.out_dir, std::move(report), ctx.timestamp);
  return kExitOk;
}

int cmd_convergence(Context& ctx, const Options& opt) {
  const RunConfig& cfg = ctx.cfg;
  const ManufacturedCase& problem = cfg.require_problem();
  if (!problem.exact) throw ConfigError("convergence needs a problem with a known exact solution");
  const std::vector<Index> levels = opt.levels.empty() ? cfg.levels : opt.levels;

  Json rows = Json::array();
  double previous = 0.0;
  ctx.out << std::left << std::setw(8) << "n" << std::setw(26) << "L2 error" << "ratio\n";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    auto mesh = case_mesh(problem, levels[k]);
    const DoublePhaseModel model(mesh, cfg.require_fields(), cfg.quadrature_order);
    const SolveReport result = solve_convection(model, problem.f, solver_config(cfg));
    const double error = l2_error(result.solution, *problem.exact);
    Json row;
    row["n"] = levels[k];
    row["l2_error"] = number(error);
    row["max_nodal_error"] = number(max_nodal_error(result.solution, *problem.exact));
    row["weak_residual"] = number(weak_residual(model, result.solution, problem.f));
    ctx.out << std::setw(8) << levels[k] << std::setw(26) << std::setprecision(17) << error;
    if (k > 0) {
      const double ratio = previous / error;
      row["ratio"] = number(ratio);
      row["rate"] = number(std::log(ratio) / std::log(static_cast<double>(levels[k]) / static_cast<double>(levels[k - 1])));
      ctx.out << std::setprecision(6) << ratio;
    }
    ctx.out << '\n';
    previous = error;
    rows.push_back(std::move(row));
  }
  Json report = header("convergence", ctx);
  report["problem"] = problem.name;
  report["levels"] = std::move(rows);
  write_report(ctx.out_dir, std::move(report), ctx.timestamp);
  return kExitOk;
}

int cmd_verify(Context& ctx) {
  const auto results = run_catalogue(ctx.cfg.seed);
  Json properties = Json::array();
  bool passed = true;
  ctx.out << std::left << std::setw(18) << "module" << std::setw(50) << "property" << std::setw(8) << "status"
          << "value\n";
  for (const auto& r : results) {
    passed = passed && r.passed;
    Json j;
    j["module"] = r.module;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["value"] = number(r.value);
    j["detail"] = r.detail;
    properties.push_back(std::move(j));
    ctx.out << std::setw(18) << r.module << std::setw(50) << r.name << std::setw(8) << (r.passed ? "pass" : "FAIL")
            << std::setprecision(6) << r.value << '\n';
  }
  const auto failures = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  ctx.out << results.size() - static_cast<std::size_t>(failures) << "/" << results.size() << " properties hold\n";
  Json report = header("verify", ctx);
  report["properties"] = std::move(properties);
  report["passed"] = passed;
  write_report(ctx.out_dir, std::move(report), ctx.timestamp);
  return passed ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable-exponent double phase problems: validation, norms, eigenvalues and solvers"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("-c,--config", opt.config, "JSON run configuration");
  app.add_option("-o,--out", opt.out, "output directory (overrides output_dir)");
  app.add_flag("--no-timestamp", opt.no_timestamp, "omit the timestamp from report.json");
  app.add_option("--threads", opt.threads, "maximum worker threads (default DPKIT_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "random seed (overrides the configuration)");

  auto* validate = app.add_subcommand("validate", "check structural hypotheses on the exponent fields");
  validate->add_option("--check", opt.checks, "base, H, H', H'', A1, density or all (comma separated)")
      ->delimiter(',');
  auto* norm = app.add_subcommand("norm", "Luxemburg norm and modular of a nodal function");
  norm->add_option("--function", opt.function, "CSV with node_index,...,value rows")->required();
  norm->add_option("--kind", opt.kind, "values, gradients or combined");
  auto* eigen = app.add_subcommand("eigen", "first Dirichlet eigenvalue of the r-Laplacian");
  eigen->add_option("--r", opt.r, "exponent r > 1 (overrides eigen.r)");
  auto* solve = app.add_subcommand("solve", "solve the configured problem");
  solve->add_flag("--vtk", opt.vtk, "also write solution.vtk");
  auto* verify = app.add_subcommand("verify", "run the property catalogue");
  auto* convergence = app.add_subcommand("convergence", "error table over uniform refinements");
  convergence->add_option("--levels", opt.levels, "mesh sizes (overrides convergence.levels)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (opt.threads > 0) set_max_threads(opt.threads);
    RunConfig cfg = opt.config.empty() ? parse_config(nlohmann::json::object(), fs::current_path())
                                       : load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    Context ctx{std::move(cfg), {}, !opt.no_timestamp, out};
    ctx.out_dir = opt.out.empty() ? ctx.cfg.output_dir : fs::path(opt.out);

    if (validate->parsed()) return cmd_validate(ctx, opt);
    if (norm->parsed()) return cmd_norm(ctx, opt);
    if (eigen->parsed()) return cmd_eigen(ctx, opt);
    if (solve->parsed()) return cmd_solve(ctx, opt);
    if (verify->parsed()) return cmd_verify(ctx);
    if (convergence->parsed()) return cmd_convergence(ctx, opt);
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace dpkit::cli
