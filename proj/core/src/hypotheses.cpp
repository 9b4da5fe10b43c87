#include "dpkit/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dpkit/errors.hpp"
#include "dpkit/function.hpp"
#include "dpkit/model.hpp"

namespace dpkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

PairList sample_pairs(const SampleSet& samples, const PairSampling& sampling) {
  const std::size_t n = samples.size();
  PairList pairs;
  if (n < 2) return pairs;
  const std::size_t total = n * (n - 1) / 2;
  if (total <= sampling.budget) {
    pairs.reserve(total);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
  }
  // Nodal samples come first, so node indices are sample indices.
  for (const auto& [a, b] : samples.mesh().edges())
    pairs.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  std::mt19937_64 rng(sampling.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < sampling.budget; ++k) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (j == i) j = (i + 1) % n;
    pairs.emplace_back(std::min(i, j), std::max(i, j));
  }
  return pairs;
}

/// Tightest slack over all samples; NaN counts as a violation.
template <class Slack>
Check slack_check(std::string name, const SampleSet& samples, Slack slack, bool strict) {
  Check c;
  c.name = std::move(name);
  c.margin = kInf;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double v = slack(k);
    if (std::isnan(v)) v = -kInf;
    if (v < c.margin) {
      c.margin = v;
      arg = k;
    }
  }
  c.passed = strict ? c.margin > 0.0 : c.margin >= 0.0;
  if (!c.passed) c.witness = samples.points()[arg].x;
  return c;
}

Check finite_samples_check(const SampleSet& samples, const std::vector<double>& p, const std::vector<double>& q,
                           const std::vector<double>& mu) {
  Check c{"finite samples", true, 0.0, std::nullopt, false, ""};
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!std::isfinite(p[k]) || !std::isfinite(q[k]) || !std::isfinite(mu[k])) {
      c.passed = false;
      c.margin = -kInf;
      c.witness = samples.points()[k].x;
      break;
    }
  }
  return c;
}

Check estimate_check(std::string name, double value, std::string note) {
  Check c{std::move(name), std::isfinite(value), value, std::nullopt, true, std::move(note)};
  return c;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

}  // namespace

bool HypothesisReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* HypothesisReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void HypothesisReport::append(const HypothesisReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

double critical_exponent(double p, int dimension) {
  const double n = static_cast<double>(dimension);
  if (!(p < n)) {
    std::ostringstream msg;
    msg << "critical exponent undefined for p = " << p << " >= N = " << dimension;
    throw DomainError(msg.str());
  }
  return n * p / (n - p);
}

double critical_exponent(const ExponentField& p, const Point& x, int dimension) {
  return critical_exponent(p.at(x), dimension);
}

HypothesisReport check_condition_base(const CoefficientFields& fields, const SampleSet& samples, int dimension) {
  if (dimension < 2) throw InvalidInput("hypotheses require N >= 2");
  const auto p = samples.evaluate(fields.p);
  const auto q = samples.evaluate(fields.q);
  const auto mu = samples.evaluate(fields.mu);
  const double n = static_cast<double>(dimension);

  HypothesisReport report;
  report.hypothesis = "base";
  report.add(finite_samples_check(samples, p, q, mu));
  report.add(slack_check("1<p", samples, [&](std::size_t k) { return p[k] - 1.0; }, true));
  report.add(slack_check("p<N", samples, [&](std::size_t k) { return n - p[k]; }, true));
  report.add(slack_check("p<q", samples, [&](std::size_t k) { return q[k] - p[k]; }, true));
  report.add(slack_check("mu>=0", samples, [&](std::size_t k) { return mu[k]; }, false));

  Check integral{"int(mu)<inf", true, 0.0, std::nullopt, false, ""};
  try {
    const Quadrature quadrature(samples.mesh().dimension());
    const Mesh& mesh = samples.mesh();
    integral.margin = integrate(mesh, quadrature, [&](const QuadraturePoint& qp) {
      return fields.mu.at(mesh, qp.element, qp.bary, qp.x);
    });
    integral.passed = std::isfinite(integral.margin);
  } catch (const NumericError&) {
    integral.passed = false;
    integral.margin = kInf;
  }
  if (!integral.passed) integral.witness = samples.points()[argmax(mu)].x;
  report.add(integral);
  return report;
}

HypothesisReport check_condition_H(const CoefficientFields& fields, const SampleSet& samples, int dimension) {
  HypothesisReport report = check_condition_base(fields, samples, dimension);
  report.hypothesis = "H";
  const auto p = samples.evaluate(fields.p);
  const auto q = samples.evaluate(fields.q);
  const auto mu = samples.evaluate(fields.mu);
  const double n = static_cast<double>(dimension);

  report.add(slack_check(
      "q<p*", samples,
      [&](std::size_t k) { return p[k] < n ? n * p[k] / (n - p[k]) - q[k] : -kInf; }, true));

  Check bounded{"mu in L^inf", true, 0.0, std::nullopt, false, ""};
  const std::size_t k = argmax(mu);
  bounded.margin = mu[k];
  bounded.passed = std::isfinite(mu[k]);
  if (!bounded.passed) bounded.witness = samples.points()[k].x;
  report.add(bounded);
  return report;
}

HypothesisReport check_condition_Hprime(const CoefficientFields& fields, const SampleSet& samples, int dimension,
                                        bool relaxed, const PairSampling& sampling) {
  HypothesisReport report = check_condition_base(fields, samples, dimension);
  report.hypothesis = relaxed ? "H' (relaxed)" : "H'";
  const auto p = samples.evaluate(fields.p);
  const auto q = samples.evaluate(fields.q);
  const double n = static_cast<double>(dimension);

  const std::size_t ip = static_cast<std::size_t>(std::distance(p.begin(), std::min_element(p.begin(), p.end())));
  const std::size_t iq = argmax(q);
  const double p_minus = p[ip];
  const double q_plus = q[iq];
  // q+/p- < 1 + 1/N  <=>  N q+ < (N + 1) p-, compared without rounding the quotient
  const double lhs = n * q_plus;
  const double rhs = (n + 1.0) * p_minus;
  Check ratio;
  ratio.name = relaxed ? "q+/p-<=1+1/N" : "q+/p-<1+1/N";
  ratio.margin = 1.0 + 1.0 / n - q_plus / p_minus;
  ratio.passed = relaxed ? lhs <= rhs : lhs < rhs;
  if (!ratio.passed) ratio.witness = samples.points()[iq].x;
  report.add(ratio);

  const char* note = "empirical lower bound";
  report.add(estimate_check("lipschitz(p)", estimate_holder(fields.p, samples, 1.0, sampling), note));
  report.add(estimate_check("lipschitz(q)", estimate_holder(fields.q, samples, 1.0, sampling), note));
  report.add(estimate_check("lipschitz(mu)", estimate_holder(fields.mu, samples, 1.0, sampling), note));
  return report;
}

HypothesisReport check_condition_Hdoubleprime(const CoefficientFields& fields, const SampleSet& samples,
                                              const PairSampling& sampling) {
  const auto p = samples.evaluate(fields.p);
  const auto q = samples.evaluate(fields.q);
  const auto mu = samples.evaluate(fields.mu);

  HypothesisReport report;
  report.hypothesis = "H''";
  report.add(finite_samples_check(samples, p, q, mu));
  report.add(slack_check("p>=1", samples, [&](std::size_t k) { return p[k] - 1.0; }, false));
  report.add(slack_check("p<=q", samples, [&](std::size_t k) { return q[k] - p[k]; }, false));
  report.add(slack_check("mu>=0", samples, [&](std::size_t k) { return mu[k]; }, false));

  const char* note = "empirical lower bound; decay at infinity not required on bounded domains";
  report.add(estimate_check("log-holder(p)", estimate_log_holder(fields.p, samples, false, sampling).c_local, note));
  report.add(estimate_check("log-holder(q)", estimate_log_holder(fields.q, samples, false, sampling).c_local, note));
  return report;
}

HypothesisReport check_density(const CoefficientFields& fields, const SampleSet& samples, int dimension,
                               const PairSampling& sampling) {
  HypothesisReport report = check_condition_Hprime(fields, samples, dimension, true, sampling);
  report.hypothesis = "density";
  const auto p = samples.evaluate(fields.p);
  const auto q = samples.evaluate(fields.q);
  const auto mu = samples.evaluate(fields.mu);

  // (A0): beta <= H^{-1}(x, 1) <= 1/beta
  Check a0{"A0", true, kInf, std::nullopt, false, "margin is the largest admissible beta"};
  std::size_t arg = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double t = 0.0;
    if (p[k] > 0.0 && q[k] > 0.0 && mu[k] >= 0.0) t = phase_inverse(1.0, p[k], q[k], mu[k]);
    const double beta = t > 0.0 ? std::min(t, 1.0 / t) : 0.0;
    if (!(beta >= a0.margin)) {
      a0.margin = beta;
      arg = k;
    }
  }
  a0.passed = a0.margin > 0.0;
  if (!a0.passed) a0.witness = samples.points()[arg].x;
  report.add(a0);

  // (aDec) holds with l = q+ whenever q is bounded.
  const std::size_t iq = argmax(q);
  Check adec{"aDec", std::isfinite(q[iq]), q[iq], std::nullopt, false, "margin is the exponent l = q+"};
  if (!adec.passed) adec.witness = samples.points()[iq].x;
  report.add(adec);

  report.add(Check{"A2", true, 0.0, std::nullopt, false, "implied by the structure of H on bounded domains; not tested"});
  return report;
}

double estimate_holder(const ExponentField& field, const SampleSet& samples, double alpha,
                       const PairSampling& sampling) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("Hoelder exponent must lie in (0, 1]");
  if (samples.size() < 2) throw InvalidInput("Hoelder estimate needs at least two samples");
  const auto v = samples.evaluate(field);
  const auto pts = samples.points();
  double best = 0.0;
  for (const auto& [i, j] : sample_pairs(samples, sampling)) {
    const double d = distance(pts[i].x, pts[j].x);
    if (d <= 0.0) continue;
    best = std::max(best, std::abs(v[i] - v[j]) / std::pow(d, alpha));
  }
  return best;
}

LogHolderEstimate estimate_log_holder(const ExponentField& field, const SampleSet& samples, bool fit_decay,
                                      const PairSampling& sampling) {
  const auto v = samples.evaluate(field);
  const auto pts = samples.points();
  LogHolderEstimate out;
  for (const auto& [i, j] : sample_pairs(samples, sampling)) {
    const double d = distance(pts[i].x, pts[j].x);
    if (d <= 0.0 || d >= 0.5) continue;
    out.c_local = std::max(out.c_local, std::abs(v[i] - v[j]) * std::abs(std::log(d)));
  }
  if (fit_decay) {
    const Bounds b = sample_bounds(v);
    LogHolderDecay decay{0.5 * (b.minus + b.plus), 0.0};
    for (std::size_t k = 0; k < v.size(); ++k)
      decay.c_g = std::max(decay.c_g, std::abs(v[k] - decay.g_inf) * std::log(std::exp(1.0) + norm(pts[k].x)));
    out.decay = decay;
  }
  return out;
}

HypothesisReport check_A1_sufficient(const CoefficientFields& fields, const SampleSet& samples, int dimension,
                                     double alpha, const PairSampling& sampling) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("Hoelder exponent must lie in (0, 1]");
  const auto p = samples.evaluate(fields.p);
  const auto q = samples.evaluate(fields.q);
  const double n = static_cast<double>(dimension);

  HypothesisReport report;
  report.hypothesis = "A1 (sufficient)";
  // q/p <= 1 + alpha/N  <=>  N q <= (N + alpha) p
  Check ratio = slack_check("q/p<=1+alpha/N", samples, [&](std::size_t k) { return 1.0 + alpha / n - q[k] / p[k]; },
                            false);
  std::size_t worst = 0;
  bool ok = true;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!(n * q[k] <= (n + alpha) * p[k])) {
      ok = false;
      worst = k;
      break;
    }
  }
  ratio.passed = ok;
  ratio.witness = ok ? std::nullopt : std::optional<Point>(samples.points()[worst].x);
  report.add(ratio);

  const double q_minus = sample_bounds(q).minus;
  report.add(estimate_check("holder(q)", estimate_holder(fields.q, samples, std::min(1.0, alpha / q_minus), sampling),
                            "exponent alpha/q-; empirical lower bound"));
  report.add(estimate_check("holder(mu)", estimate_holder(fields.mu, samples, alpha, sampling),
                            "exponent alpha; empirical lower bound"));
  return report;
}

A1Characterization check_A1_characterization(const CoefficientFields& fields, const SampleSet& samples, int dimension,
                                             std::size_t pair_budget, std::uint64_t seed) {
  if (pair_budget < 1) throw InvalidInput("pair budget must be positive");
  const auto p = samples.evaluate(fields.p);
  const auto q = samples.evaluate(fields.q);
  const auto mu = samples.evaluate(fields.mu);
  const auto pts = samples.points();
  const double n = static_cast<double>(dimension);

  std::vector<double> root(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) root[k] = mu[k] > 0.0 ? std::pow(mu[k], 1.0 / q[k]) : 0.0;

  A1Characterization out;
  out.beta_max = kInf;
  std::size_t witness = 0;
  auto visit = [&](std::size_t x, std::size_t y) {
    if (root[y] <= 0.0) return;  // inequality holds for every beta
    const double d = distance(pts[x].x, pts[y].x);
    const double gamma = n * (1.0 / p[y] - 1.0 / q[y]);
    const double ratio = (std::pow(d, gamma) + root[x]) / root[y];
    if (ratio < out.beta_max) {
      out.beta_max = ratio;
      witness = y;
    }
  };
  const auto pairs = sample_pairs(samples, PairSampling{pair_budget, seed});
  for (const auto& [i, j] : pairs) {
    visit(i, j);
    visit(j, i);
  }
  out.pairs = 2 * pairs.size();

  out.report.hypothesis = "A1 (characterization)";
  Check c{"beta>0", out.beta_max > 0.0, out.beta_max, std::nullopt, false,
          std::isinf(out.beta_max) ? "mu vanishes at every sample" : "min over sampled pairs"};
  if (!c.passed) c.witness = pts[witness].x;
  out.report.add(c);
  return out;
}

}  // namespace dpkit
