#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpkit/exponent_field.hpp"

namespace dpkit {

/// The coefficient triple (p, q, mu) of the double-phase integrand t^p + mu t^q.
struct CoefficientFields {
  ExponentField p = ExponentField::constant(2.0);
  ExponentField q = ExponentField::constant(2.0);
  ExponentField mu = ExponentField::constant(0.0);
};

/// One named inequality evaluated over a sample set.
struct Check {
  std::string name;
  bool passed = true;
  /// Signed slack of the inequality at its tightest sample (>= 0 means satisfied, up to
  /// strictness). For estimated constants this is the estimate itself.
  double margin = 0.0;
  /// Sample at which the inequality is tightest; always present when the check fails.
  std::optional<Point> witness;
  /// Set for empirical continuity moduli: the value is a lower bound of the true constant.
  bool lower_bound = false;
  std::string note;
};

struct HypothesisReport {
  std::string hypothesis;
  std::vector<Check> checks;

  bool passed() const;
  const Check* find(std::string_view name) const;
  void add(Check check) { checks.push_back(std::move(check)); }
  void append(const HypothesisReport& other);
};

/// How point pairs are chosen for continuity-modulus estimates: every pair when there are at
/// most `budget` of them, otherwise all mesh edges plus `budget` seeded random pairs.
struct PairSampling {
  std::size_t budget = 20000;
  std::uint64_t seed = 20240601;
};

/// N p / (N - p). Throws DomainError when p >= N.
double critical_exponent(double p, int dimension);
double critical_exponent(const ExponentField& p, const Point& x, int dimension);

/// 1 < p < N, p < q, mu >= 0 at every sample and a finite integral of mu.
HypothesisReport check_condition_base(const CoefficientFields& fields, const SampleSet& samples, int dimension);

/// Base conditions plus q < p* at every sample and a finite maximum of mu.
HypothesisReport check_condition_H(const CoefficientFields& fields, const SampleSet& samples, int dimension);

/// Base conditions plus q+/p- < 1 + 1/N (<= when `relaxed`, the variant used for density) and
/// empirical Lipschitz constants of p, q and mu.
HypothesisReport check_condition_Hprime(const CoefficientFields& fields, const SampleSet& samples, int dimension,
                                        bool relaxed = false, const PairSampling& sampling = {});

/// Bounded p <= q with p, q >= 1, bounded mu and finite empirical log-Hoelder constants. The
/// decay condition at infinity is not required on bounded meshes.
HypothesisReport check_condition_Hdoubleprime(const CoefficientFields& fields, const SampleSet& samples,
                                              const PairSampling& sampling = {});

/// Hypotheses of the density theorem on bounded domains: relaxed (H'), (A0) and (aDec).
/// (A2) is listed as implied by the structure of H and is not tested independently.
HypothesisReport check_density(const CoefficientFields& fields, const SampleSet& samples, int dimension,
                               const PairSampling& sampling = {});

/// max over sampled pairs of |f(x) - f(y)| / |x - y|^alpha. A lower bound of the true
/// Hoelder constant. Throws InvalidInput unless alpha lies in (0, 1].
double estimate_holder(const ExponentField& field, const SampleSet& samples, double alpha,
                       const PairSampling& sampling = {});

struct LogHolderDecay {
  double g_inf = 0.0;
  double c_g = 0.0;
};

struct LogHolderEstimate {
  double c_local = 0.0;  ///< max of |h(x) - h(y)| |log|x - y|| over pairs with |x - y| < 1/2
  std::optional<LogHolderDecay> decay;
};

/// Empirical log-Hoelder constant; the decay constants are fitted only when `fit_decay` is set
/// (with g_inf the midrange of the samples).
LogHolderEstimate estimate_log_holder(const ExponentField& field, const SampleSet& samples, bool fit_decay = false,
                                      const PairSampling& sampling = {});

/// q/p <= 1 + alpha/N everywhere, with finite alpha/q- Hoelder estimate for q and alpha
/// Hoelder estimate for mu.
HypothesisReport check_A1_sufficient(const CoefficientFields& fields, const SampleSet& samples, int dimension,
                                     double alpha, const PairSampling& sampling = {});

struct A1Characterization {
  /// min over sampled pairs of (|x-y|^{N(1/p(y)-1/q(y))} + mu(x)^{1/q(x)}) / mu(y)^{1/q(y)};
  /// +infinity when mu vanishes at every sample.
  double beta_max = 0.0;
  std::size_t pairs = 0;
  HypothesisReport report;
};

A1Characterization check_A1_characterization(const CoefficientFields& fields, const SampleSet& samples, int dimension,
                                             std::size_t pair_budget, std::uint64_t seed = PairSampling{}.seed);

}  // namespace dpkit
