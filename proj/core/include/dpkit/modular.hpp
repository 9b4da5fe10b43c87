#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dpkit/model.hpp"

namespace dpkit {

/// Which modular a computation refers to.
enum class ModularKind {
  values,     ///< rho_H(u) = int H(x, |u|)
  gradients,  ///< rho_H(|grad u|)
  combined,   ///< rho_H(|grad u|) + rho_H(|u|)
};

const char* to_string(ModularKind kind);

struct ModularReport {
  ModularKind kind = ModularKind::values;
  double total = 0.0;
  double p_part = 0.0;
  double q_part = 0.0;
  /// Only for the combined modular: the four constituent integrals.
  double gradient_p = 0.0;
  double gradient_q = 0.0;
  double value_p = 0.0;
  double value_q = 0.0;
  std::optional<double> norm;
};

struct NormResult {
  double norm = 0.0;
  int iterations = 0;
  /// |rho(u / norm) - 1| at the returned norm (0 for u = 0).
  double residual = 0.0;
  ModularReport modular;
};

/// Flattened modular integrand: sum_k w_k [c_k (a_k/lambda)^{p_k} + mu_k (a_k/lambda)^{q_k}],
/// where c_k is 1, or 0 for the mu-weighted seminorm.
class ModularSamples {
 public:
  void add(double weight, double magnitude, const PhaseCoefficients& c, bool with_p_phase = true);
  void reserve(std::size_t n) { terms_.reserve(n); }
  std::size_t size() const { return terms_.size(); }

  /// rho(u / lambda), split into the p-phase and the q-phase.
  std::pair<double, double> parts(double lambda = 1.0) const;
  double evaluate(double lambda = 1.0) const;

  /// Luxemburg norm inf{lambda > 0 : rho(u/lambda) <= 1} by bisection. The bracket comes from
  /// the modular sandwich inequalities; bisection runs until the bracket cannot shrink, and
  /// the result must satisfy |rho(u/lambda) - 1| <= tol or NumericError is thrown.
  NormResult luxemburg(double tol) const;

 private:
  struct Term {
    double weight;
    double log_magnitude;
    double p;
    double q;
    double mu;
    bool with_p;
  };
  std::vector<Term> terms_;
  double exponent_min_ = std::numeric_limits<double>::infinity();
  double exponent_max_ = 0.0;
};

inline constexpr double kDefaultNormTol = 1e-12;

/// Quadrature samples of |u| or |grad u| with the model coefficients.
ModularSamples modular_samples(const DoublePhaseModel& model, const DiscreteFunction& u, ModularKind kind);

/// rho_H(u), or rho_H(|grad u|) when `on_gradient`. Throws InvalidInput on mesh mismatch.
ModularReport modular_H(const DoublePhaseModel& model, const DiscreteFunction& u, bool on_gradient = false);
/// Gradient modular plus value modular.
ModularReport modular_hat(const DoublePhaseModel& model, const DiscreteFunction& u);
ModularReport modular(const DoublePhaseModel& model, const DiscreteFunction& u, ModularKind kind);

/// Throws InvalidInput unless tol > 0.
NormResult luxemburg_norm(const DoublePhaseModel& model, const DiscreteFunction& u,
                          ModularKind kind = ModularKind::values, double tol = kDefaultNormTol);
/// Norm of the zero-boundary space: the Luxemburg norm of |grad u|.
double gradient_norm(const DoublePhaseModel& model, const DiscreteFunction& u, double tol = kDefaultNormTol);

/// Luxemburg norm for the modular int mu |u|^q. Zero when that modular vanishes.
NormResult seminorm_mu(const DoublePhaseModel& model, const DiscreteFunction& u, double tol = kDefaultNormTol);

struct NormModularRelation {
  ModularKind kind = ModularKind::values;
  double norm = 0.0;
  double modular = 0.0;
  double p_minus = 0.0;
  double q_plus = 0.0;
  double unit_ball_residual = 0.0;  ///< |rho(u/||u||) - 1|
  bool sign_consistent = true;      ///< rho < 1 <=> ||u|| < 1 and rho > 1 <=> ||u|| > 1
  /// Slack of the two sandwich inequalities, relative to max(1, rho); >= 0 when they hold.
  double lower_slack = 0.0;
  double upper_slack = 0.0;
  bool passed = true;
};

/// Unit-ball property, sign equivalences and the sandwich between rho and powers of the
/// norm. Throws InvalidInput for u = 0.
NormModularRelation check_norm_modular(const DoublePhaseModel& model, const DiscreteFunction& u,
                                       ModularKind kind = ModularKind::values, double tol = 1e-10);

/// Inverse of the Sobolev conjugate: int_0^s H_1^{-1}(x, tau) tau^{-(N+1)/N} dtau, where H_1 is
/// linear (t H(x, 1)) on [0, 1] and H beyond. Throws NumericError if the adaptive quadrature
/// misses `tol` and InvalidInput for s < 0 or N < 2.
double sobolev_conjugate_inverse(const CoefficientFields& fields, const Point& x, double s, int dimension,
                                 double tol = 1e-10);

struct ReverseHolderResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = true;
};

/// Reverse Hoelder inequality on quadrature samples (values of f, g, r at points with
/// physical weights). Throws InvalidInput if g vanishes at a weighted sample or r_- <= 1.
ReverseHolderResult reverse_holder_check(std::span<const double> f, std::span<const double> g,
                                         std::span<const double> r, std::span<const double> weights,
                                         double tol = 1e-12);
/// Same with P1 functions and an exponent field evaluated at the quadrature points of `quadrature`.
ReverseHolderResult reverse_holder_check(const DiscreteFunction& f, const DiscreteFunction& g, const ExponentField& r,
                                         const Quadrature& quadrature, double tol = 1e-12);

enum class TruncationSign { plus, minus };

/// Nodal truncation max(+-u, 0).
DiscreteFunction truncate(const DiscreteFunction& u, TruncationSign sign);

struct ConvexityProbe {
  bool near_branch = false;  ///< |t - s| <= eps max(t, s)
  double delta = 0.0;        ///< 1 - 2 H((t+s)/2) / (H(t) + H(s))
  bool passed = true;
};

/// Throws InvalidInput unless t, s >= 0 and eps lies in (0, 1).
ConvexityProbe uniform_convexity_probe(const PhaseCoefficients& c, double t, double s, double eps);
ConvexityProbe uniform_convexity_probe(const CoefficientFields& fields, const Point& x, double t, double s, double eps);

/// ||u||_H / ||grad u||_H for u vanishing on the boundary. InvalidInput for u = 0 or nonzero
/// boundary values, NumericError if the gradient vanishes.
double poincare_ratio(const DoublePhaseModel& model, const DiscreteFunction& u, double tol = kDefaultNormTol);

}  // namespace dpkit
