#include "dpkit/modular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dpkit/errors.hpp"

namespace dpkit {

const char* to_string(ModularKind kind) {
  switch (kind) {
    case ModularKind::values:
      return "values";
    case ModularKind::gradients:
      return "gradients";
    case ModularKind::combined:
      return "combined";
  }
  return "values";
}

void ModularSamples::add(double weight, double magnitude, const PhaseCoefficients& c, bool with_p_phase) {
  const double a = std::abs(magnitude);
  if (weight == 0.0 || a == 0.0) return;
  if (!with_p_phase && c.mu == 0.0) return;
  terms_.push_back({weight, std::log(a), c.p, c.q, c.mu, with_p_phase});
  if (with_p_phase) {
    exponent_min_ = std::min(exponent_min_, c.p);
    exponent_max_ = std::max(exponent_max_, c.p);
  }
  if (c.mu != 0.0) {
    exponent_min_ = std::min(exponent_min_, c.q);
    exponent_max_ = std::max(exponent_max_, c.q);
  }
}

std::pair<double, double> ModularSamples::parts(double lambda) const {
  const double shift = std::log(lambda);
  double sp = 0.0;
  double sq = 0.0;
  for (const auto& t : terms_) {
    const double la = t.log_magnitude - shift;
    if (t.with_p) sp += t.weight * std::exp(t.p * la);
    if (t.mu != 0.0) sq += t.weight * t.mu * std::exp(t.q * la);
  }
  return {sp, sq};
}

double ModularSamples::evaluate(double lambda) const {
  const auto [sp, sq] = parts(lambda);
  return sp + sq;
}

NormResult ModularSamples::luxemburg(double tol) const {
  if (!(tol > 0.0)) throw InvalidInput("norm tolerance must be positive");
  NormResult out;
  if (terms_.empty()) return out;

  const double m = evaluate(1.0);
  if (!std::isfinite(m)) throw NumericError("modular is not finite; cannot bracket the norm");
  const double r1 = std::pow(m, 1.0 / exponent_max_);
  const double r2 = std::pow(m, 1.0 / exponent_min_);
  double lo = std::min(r1, r2) * (1.0 - 1e-9);
  double hi = std::max(r1, r2) * (1.0 + 1e-9);
  for (int k = 0; k < 64 && evaluate(lo) < 1.0; ++k) lo *= 0.5;
  for (int k = 0; k < 64 && evaluate(hi) > 1.0; ++k) hi *= 2.0;

  constexpr int kMaxIterations = 400;
  while (out.iterations < kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    ++out.iterations;
    const double v = evaluate(mid);
    if (v == 1.0) {
      lo = hi = mid;
      break;
    }
    (v > 1.0 ? lo : hi) = mid;
  }
  const double res_lo = std::abs(evaluate(lo) - 1.0);
  const double res_hi = std::abs(evaluate(hi) - 1.0);
  out.norm = res_lo < res_hi ? lo : hi;
  out.residual = std::min(res_lo, res_hi);
  if (!(out.residual <= tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Luxemburg bisection did not reach |rho(u/lambda) - 1| <= " << tol << " after " << out.iterations
        << " iterations: bracket [" << lo << ", " << hi << "], residual " << out.residual;
    throw NumericError(msg.str());
  }
  return out;
}

namespace {

void add_samples(ModularSamples& samples, const DoublePhaseModel& model, const DiscreteFunction& u, bool gradients,
                 bool with_p = true) {
  const Mesh& mesh = model.mesh();
  const std::size_t nq = model.points_per_element();
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const double g = norm(u.gradient(e));
    for (std::size_t k = 0; k < nq; ++k) {
      const double a = gradients ? g : u.value(e, model.quadrature().point(k));
      samples.add(model.weight(e, k), a, model.coefficients(e, k), with_p);
    }
  }
}

ModularReport report_of(ModularKind kind, std::pair<double, double> parts) {
  ModularReport r;
  r.kind = kind;
  r.p_part = parts.first;
  r.q_part = parts.second;
  r.total = parts.first + parts.second;
  return r;
}

}  // namespace

ModularSamples modular_samples(const DoublePhaseModel& model, const DiscreteFunction& u, ModularKind kind) {
  require_mesh(u, model.mesh());
  ModularSamples samples;
  samples.reserve(static_cast<std::size_t>(model.mesh().num_elements()) * model.points_per_element() *
                  (kind == ModularKind::combined ? 2 : 1));
  if (kind != ModularKind::values) add_samples(samples, model, u, true);
  if (kind != ModularKind::gradients) add_samples(samples, model, u, false);
  return samples;
}

ModularReport modular_H(const DoublePhaseModel& model, const DiscreteFunction& u, bool on_gradient) {
  const ModularKind kind = on_gradient ? ModularKind::gradients : ModularKind::values;
  return report_of(kind, modular_samples(model, u, kind).parts());
}

ModularReport modular_hat(const DoublePhaseModel& model, const DiscreteFunction& u) {
  const auto grad = modular_samples(model, u, ModularKind::gradients).parts();
  const auto val = modular_samples(model, u, ModularKind::values).parts();
  ModularReport r;
  r.kind = ModularKind::combined;
  r.gradient_p = grad.first;
  r.gradient_q = grad.second;
  r.value_p = val.first;
  r.value_q = val.second;
  r.p_part = grad.first + val.first;
  r.q_part = grad.second + val.second;
  r.total = r.gradient_p + r.gradient_q + r.value_p + r.value_q;
  return r;
}

ModularReport modular(const DoublePhaseModel& model, const DiscreteFunction& u, ModularKind kind) {
  switch (kind) {
    case ModularKind::values:
      return modular_H(model, u, false);
    case ModularKind::gradients:
      return modular_H(model, u, true);
    case ModularKind::combined:
      return modular_hat(model, u);
  }
  return modular_H(model, u, false);
}

NormResult luxemburg_norm(const DoublePhaseModel& model, const DiscreteFunction& u, ModularKind kind, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("norm tolerance must be positive");
  NormResult r = modular_samples(model, u, kind).luxemburg(tol);
  r.modular = modular(model, u, kind);
  r.modular.norm = r.norm;
  return r;
}

double gradient_norm(const DoublePhaseModel& model, const DiscreteFunction& u, double tol) {
  return modular_samples(model, u, ModularKind::gradients).luxemburg(tol).norm;
}

NormResult seminorm_mu(const DoublePhaseModel& model, const DiscreteFunction& u, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("norm tolerance must be positive");
  require_mesh(u, model.mesh());
  ModularSamples samples;
  add_samples(samples, model, u, false, false);
  NormResult r = samples.luxemburg(tol);
  r.modular = report_of(ModularKind::values, samples.parts());
  r.modular.norm = r.norm;
  return r;
}

NormModularRelation check_norm_modular(const DoublePhaseModel& model, const DiscreteFunction& u, ModularKind kind,
                                       double tol) {
  if (u.is_zero()) throw InvalidInput("norm-modular relations need u != 0");
  const ModularSamples samples = modular_samples(model, u, kind);
  const NormResult nr = samples.luxemburg(kDefaultNormTol);

  NormModularRelation rel;
  rel.kind = kind;
  rel.norm = nr.norm;
  rel.modular = samples.evaluate();
  rel.p_minus = model.p_bounds().minus;
  rel.q_plus = model.q_bounds().plus;
  rel.unit_ball_residual = nr.residual;

  const double n = rel.norm;
  const double rho = rel.modular;
  const double scale = std::max(1.0, rho);
  if (n < 1.0) {
    rel.lower_slack = (rho - std::pow(n, rel.q_plus)) / scale;
    rel.upper_slack = (std::pow(n, rel.p_minus) - rho) / scale;
  } else if (n > 1.0) {
    rel.lower_slack = (rho - std::pow(n, rel.p_minus)) / scale;
    rel.upper_slack = (std::pow(n, rel.q_plus) - rho) / scale;
  } else {
    rel.lower_slack = rel.upper_slack = -std::abs(rho - 1.0) / scale;
  }
  const bool boundary = std::abs(rho - 1.0) <= tol || std::abs(n - 1.0) <= tol;
  rel.sign_consistent = boundary || ((rho < 1.0) == (n < 1.0) && (rho > 1.0) == (n > 1.0));
  constexpr double kSlack = 1e-12;
  rel.passed = rel.unit_ball_residual <= tol && rel.sign_consistent && rel.lower_slack >= -kSlack &&
               rel.upper_slack >= -kSlack;
  return rel;
}

double sobolev_conjugate_inverse(const CoefficientFields& fields, const Point& x, double s, int dimension, double tol) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("Sobolev conjugate inverse needs a finite s >= 0");
  if (dimension < 2) throw InvalidInput("Sobolev conjugate inverse needs N >= 2");
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  const double p = fields.p.at(x);
  const double q = fields.q.at(x);
  const double mu = fields.mu.at(x);
  if (!(p > 1.0 && q > 1.0 && mu >= 0.0)) throw InvalidInput("Sobolev conjugate inverse needs p, q > 1 and mu >= 0");
  if (s == 0.0) return 0.0;

  const double n = static_cast<double>(dimension);
  const double h1 = 1.0 + mu;  // H(x, 1)
  // On [0, H(x,1)] the inverse is tau / H(x,1) and the integral is closed form.
  const double linear_end = std::min(s, h1);
  double value = n / (n - 1.0) * std::pow(linear_end, (n - 1.0) / n) / h1;
  if (s <= h1) return value;

  const double exponent = (n + 1.0) / n;
  auto integrand = [&](double tau) { return phase_inverse(tau, p, q, mu) / std::pow(tau, exponent); };
  double error = 0.0;
  const double tail =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, h1, s, 20, tol, &error);
  if (!(error <= tol * std::max(1.0, std::abs(tail)))) {
    std::ostringstream msg;
    msg << "adaptive quadrature error estimate " << error << " exceeds tolerance " << tol;
    throw NumericError(msg.str());
  }
  return value + tail;
}

ReverseHolderResult reverse_holder_check(std::span<const double> f, std::span<const double> g,
                                         std::span<const double> r, std::span<const double> weights, double tol) {
  if (f.size() != g.size() || f.size() != r.size() || f.size() != weights.size() || f.empty())
    throw InvalidInput("reverse Hoelder check needs equally sized non-empty sample arrays");
  double r_minus = std::numeric_limits<double>::infinity();
  double r_plus = -std::numeric_limits<double>::infinity();
  double fg = 0.0;
  double f_root = 0.0;
  double g_power = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    if (g[k] == 0.0) throw InvalidInput("g vanishes on a set of positive measure");
    r_minus = std::min(r_minus, r[k]);
    r_plus = std::max(r_plus, r[k]);
    fg += weights[k] * std::abs(f[k] * g[k]);
    f_root += weights[k] * std::pow(std::abs(f[k]), 1.0 / r[k]);
    g_power += weights[k] * std::pow(std::abs(g[k]), -1.0 / (r[k] - 1.0));
  }
  if (!(r_minus > 1.0)) throw InvalidInput("reverse Hoelder check needs r_- > 1");
  ReverseHolderResult out;
  out.lhs = std::max(std::pow(fg, 1.0 / r_minus), std::pow(fg, 1.0 / r_plus));
  out.rhs = 0.5 * f_root *
            std::min(std::pow(g_power, (1.0 - r_plus) / r_minus), std::pow(g_power, (1.0 - r_minus) / r_plus));
  out.passed = out.lhs >= out.rhs - tol;
  return out;
}

ReverseHolderResult reverse_holder_check(const DiscreteFunction& f, const DiscreteFunction& g, const ExponentField& r,
                                         const Quadrature& quadrature, double tol) {
  require_same_mesh(f, g);
  const Mesh& mesh = f.mesh();
  if (quadrature.dimension() != mesh.dimension()) throw InvalidInput("quadrature dimension does not match the mesh");
  std::vector<double> fv, gv, rv, wv;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    for (std::size_t k = 0; k < quadrature.size(); ++k) {
      const auto& bary = quadrature.point(k);
      fv.push_back(f.value(e, bary));
      gv.push_back(g.value(e, bary));
      rv.push_back(r.at(mesh, e, bary, mesh.map(e, bary)));
      wv.push_back(mesh.measure(e) * quadrature.weight(k));
    }
  }
  return reverse_holder_check(fv, gv, rv, wv, tol);
}

DiscreteFunction truncate(const DiscreteFunction& u, TruncationSign sign) {
  const double s = sign == TruncationSign::plus ? 1.0 : -1.0;
  return DiscreteFunction(u.mesh_ptr(), (s * u.coefficients()).cwiseMax(0.0));
}

ConvexityProbe uniform_convexity_probe(const PhaseCoefficients& c, double t, double s, double eps) {
  if (!(t >= 0.0 && s >= 0.0)) throw InvalidInput("convexity probe needs t, s >= 0");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("convexity probe needs eps in (0, 1)");
  ConvexityProbe out;
  out.near_branch = std::abs(t - s) <= eps * std::max(t, s);
  const double ends = phase(t, c) + phase(s, c);
  out.delta = ends > 0.0 ? 1.0 - 2.0 * phase(0.5 * (t + s), c) / ends : 0.0;
  out.passed = out.near_branch || out.delta > 0.0;
  return out;
}

ConvexityProbe uniform_convexity_probe(const CoefficientFields& fields, const Point& x, double t, double s, double eps) {
  return uniform_convexity_probe(PhaseCoefficients{fields.p.at(x), fields.q.at(x), fields.mu.at(x)}, t, s, eps);
}

double poincare_ratio(const DoublePhaseModel& model, const DiscreteFunction& u, double tol) {
  require_mesh(u, model.mesh());
  if (u.is_zero()) throw InvalidInput("Poincare ratio needs u != 0");
  if (!u.vanishes_on_boundary()) throw InvalidInput("Poincare ratio needs zero boundary values");
  const double g = gradient_norm(model, u, tol);
  if (!(g > 0.0)) throw NumericError("gradient norm vanishes for a nonzero zero-boundary function");
  return modular_samples(model, u, ModularKind::values).luxemburg(tol).norm / g;
}

}  // namespace dpkit
