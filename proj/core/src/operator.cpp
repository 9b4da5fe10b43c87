#include "dpkit/operator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "dpkit/errors.hpp"
#include "dpkit/modular.hpp"
#include "dpkit/parallel.hpp"

namespace dpkit {
namespace {

/// |g|^{p-2} + mu |g|^{q-2}, with the product against g taken as zero at g = 0.
double flux_scale(double g, const PhaseCoefficients& c) {
  if (g == 0.0) return 0.0;
  double a = std::pow(g, c.p - 2.0);
  if (c.mu != 0.0) a += c.mu * std::pow(g, c.q - 2.0);
  return a;
}

double value_power(double v, const PhaseCoefficients& c) {
  const double a = std::abs(v);
  if (a == 0.0) return 0.0;
  double out = std::pow(a, c.p - 2.0);
  if (c.mu != 0.0) out += c.mu * std::pow(a, c.q - 2.0);
  return out;
}

double potential(double t, const PhaseCoefficients& c) {
  if (t == 0.0) return 0.0;
  double out = std::pow(t, c.p) / c.p;
  if (c.mu != 0.0) out += c.mu * std::pow(t, c.q) / c.q;
  return out;
}

/// Runs local(e, out) for every element into a buffer of `width` doubles per element, then
/// scatters in element order so results do not depend on the thread count.
template <class Local, class Scatter>
void element_loop(const Mesh& mesh, std::size_t width, Local local, Scatter scatter) {
  const auto n = static_cast<std::size_t>(mesh.num_elements());
  std::vector<double> buffer(n * width);
  for_each_chunk(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) local(static_cast<Index>(e), buffer.data() + e * width);
  });
  for (std::size_t e = 0; e < n; ++e) scatter(static_cast<Index>(e), buffer.data() + e * width);
}

void require_free_size(const DoublePhaseModel& model, const Eigen::VectorXd& v) {
  if (v.size() != model.mesh().num_free())
    throw InvalidInput("right-hand side has " + std::to_string(v.size()) + " entries but the mesh has " +
                       std::to_string(model.mesh().num_free()) + " free nodes");
}

}  // namespace

double energy_I(const DoublePhaseModel& model, const DiscreteFunction& u) {
  require_mesh(u, model.mesh());
  return integrate(model.mesh(), model.quadrature(), [&](const QuadraturePoint& qp) {
    return potential(norm(u.gradient(qp.element)), model.coefficients(qp.element, qp.local));
  });
}

double apply_A(const DoublePhaseModel& model, const DiscreteFunction& u, const DiscreteFunction& v) {
  require_mesh(u, model.mesh());
  require_mesh(v, model.mesh());
  return integrate(model.mesh(), model.quadrature(), [&](const QuadraturePoint& qp) {
    const Vec2& gu = u.gradient(qp.element);
    return flux_scale(norm(gu), model.coefficients(qp.element, qp.local)) * dot(gu, v.gradient(qp.element));
  });
}

double apply_B(const DoublePhaseModel& model, const DiscreteFunction& u, const DiscreteFunction& v) {
  const double principal = apply_A(model, u, v);
  const double lower = integrate(model.mesh(), model.quadrature(), [&](const QuadraturePoint& qp) {
    const double uv = u.value(qp.element, qp.bary);
    return value_power(uv, model.coefficients(qp.element, qp.local)) * uv * v.value(qp.element, qp.bary);
  });
  return principal + lower;
}

double energy_J(const DoublePhaseModel& model, const DiscreteFunction& u) {
  const double principal = energy_I(model, u);
  const double lower = integrate(model.mesh(), model.quadrature(), [&](const QuadraturePoint& qp) {
    return potential(std::abs(u.value(qp.element, qp.bary)), model.coefficients(qp.element, qp.local));
  });
  return principal + lower;
}

Eigen::VectorXd apply_A_basis(const DoublePhaseModel& model, const DiscreteFunction& u) {
  require_mesh(u, model.mesh());
  const Mesh& mesh = model.mesh();
  const int nv = mesh.vertices_per_element();
  const std::size_t nq = model.points_per_element();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.num_free());
  element_loop(
      mesh, 3,
      [&](Index e, double* local) {
        const Vec2& g = u.gradient(e);
        const double gn = norm(g);
        double scale = 0.0;
        for (std::size_t k = 0; k < nq; ++k) scale += model.weight(e, k) * flux_scale(gn, model.coefficients(e, k));
        for (int j = 0; j < nv; ++j) local[j] = scale * dot(g, mesh.basis_gradient(e, j));
      },
      [&](Index e, const double* local) {
        const auto& el = mesh.element(e);
        for (int j = 0; j < nv; ++j) {
          const Index i = mesh.free_index(el[j]);
          if (i >= 0) out[i] += local[j];
        }
      });
  return out;
}

Eigen::VectorXd assemble_load(const DoublePhaseModel& model, const std::function<double(const QuadraturePoint&)>& g) {
  const Mesh& mesh = model.mesh();
  const int nv = mesh.vertices_per_element();
  const Quadrature& quad = model.quadrature();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.num_free());
  element_loop(
      mesh, 3,
      [&](Index e, double* local) {
        std::fill(local, local + 3, 0.0);
        const double measure = mesh.measure(e);
        for (std::size_t k = 0; k < quad.size(); ++k) {
          const auto& bary = quad.point(k);
          const QuadraturePoint qp{e, k, mesh.map(e, bary), bary, measure * quad.weight(k)};
          const double v = g(qp);
          if (!std::isfinite(v)) throw NumericError("load integrand is not finite on element " + std::to_string(e));
          for (int j = 0; j < nv; ++j) local[j] += qp.weight * v * bary[static_cast<std::size_t>(j)];
        }
      },
      [&](Index e, const double* local) {
        const auto& el = mesh.element(e);
        for (int j = 0; j < nv; ++j) {
          const Index i = mesh.free_index(el[j]);
          if (i >= 0) out[i] += local[j];
        }
      });
  return out;
}

Eigen::VectorXd assemble_load(const DoublePhaseModel& model, const std::function<double(const Point&)>& f) {
  return assemble_load(model, std::function<double(const QuadraturePoint&)>(
                                  [&](const QuadraturePoint& qp) { return f(qp.x); }));
}

OperatorAssembly assemble_residual(const DoublePhaseModel& model, const DiscreteFunction& u,
                                   const Eigen::VectorXd& rhs) {
  require_free_size(model, rhs);
  OperatorAssembly out;
  out.residual = apply_A_basis(model, u) - rhs;
  return out;
}

OperatorAssembly assemble_system(const DoublePhaseModel& model, const DiscreteFunction& u, const Eigen::VectorXd& rhs,
                                 double eps_reg) {
  OperatorAssembly out = assemble_residual(model, u, rhs);
  out.jacobian = assemble_jacobian(model, u, eps_reg);
  out.eps_reg = eps_reg;
  return out;
}

SparseMatrix assemble_jacobian(const DoublePhaseModel& model, const DiscreteFunction& u, double eps_reg) {
  if (!(eps_reg > 0.0)) throw InvalidInput("Jacobian regularization must be positive");
  require_mesh(u, model.mesh());
  const Mesh& mesh = model.mesh();
  const int nv = mesh.vertices_per_element();
  const std::size_t nq = model.points_per_element();
  const double eps2 = eps_reg * eps_reg;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * 9);
  element_loop(
      mesh, 9,
      [&](Index e, double* local) {
        const Vec2& g = u.gradient(e);
        const double s = dot(g, g) + eps2;
        double a = 0.0;
        double b = 0.0;
        for (std::size_t k = 0; k < nq; ++k) {
          const auto& c = model.coefficients(e, k);
          const double w = model.weight(e, k);
          a += w * std::pow(s, 0.5 * (c.p - 2.0));
          b += w * (c.p - 2.0) * std::pow(s, 0.5 * (c.p - 4.0));
          if (c.mu != 0.0) {
            a += w * c.mu * std::pow(s, 0.5 * (c.q - 2.0));
            b += w * c.mu * (c.q - 2.0) * std::pow(s, 0.5 * (c.q - 4.0));
          }
        }
        for (int i = 0; i < nv; ++i) {
          const Vec2& gi = mesh.basis_gradient(e, i);
          for (int j = 0; j < nv; ++j) {
            const Vec2& gj = mesh.basis_gradient(e, j);
            local[3 * i + j] = a * dot(gi, gj) + b * dot(g, gi) * dot(g, gj);
          }
        }
      },
      [&](Index e, const double* local) {
        const auto& el = mesh.element(e);
        for (int i = 0; i < nv; ++i) {
          const Index fi = mesh.free_index(el[i]);
          if (fi < 0) continue;
          for (int j = 0; j < nv; ++j) {
            const Index fj = mesh.free_index(el[j]);
            if (fj >= 0) triplets.emplace_back(fi, fj, local[3 * i + j]);
          }
        }
      });
  SparseMatrix jac(mesh.num_free(), mesh.num_free());
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

SparseMatrix stiffness_matrix(const Mesh& mesh) {
  const int nv = mesh.vertices_per_element();
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.element(e);
    for (int i = 0; i < nv; ++i) {
      const Index fi = mesh.free_index(el[i]);
      if (fi < 0) continue;
      for (int j = 0; j < nv; ++j) {
        const Index fj = mesh.free_index(el[j]);
        if (fj >= 0)
          triplets.emplace_back(fi, fj, mesh.measure(e) * dot(mesh.basis_gradient(e, i), mesh.basis_gradient(e, j)));
      }
    }
  }
  SparseMatrix k(mesh.num_free(), mesh.num_free());
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

SparseMatrix mass_matrix(const Mesh& mesh) {
  const int nv = mesh.vertices_per_element();
  // Exact P1 mass: |e| (1 + delta_ij) / ((d + 1)(d + 2)).
  const double denom = mesh.dimension() == 1 ? 6.0 : 12.0;
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.element(e);
    for (int i = 0; i < nv; ++i) {
      const Index fi = mesh.free_index(el[i]);
      if (fi < 0) continue;
      for (int j = 0; j < nv; ++j) {
        const Index fj = mesh.free_index(el[j]);
        if (fj >= 0) triplets.emplace_back(fi, fj, mesh.measure(e) * (i == j ? 2.0 : 1.0) / denom);
      }
    }
  }
  SparseMatrix m(mesh.num_free(), mesh.num_free());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

void export_coo(std::ostream& out, const SparseMatrix& matrix) {
  const auto precision = out.precision(17);
  for (int col = 0; col < matrix.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  out.precision(precision);
}

double gradient_check(const DoublePhaseModel& model, const DiscreteFunction& u, const DiscreteFunction& h, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("finite-difference step must be positive");
  require_same_mesh(u, h);
  require_mesh(u, model.mesh());
  // (I(u + eps h) - I(u - eps h)) / (2 eps) pointwise: with m = |a|^2 + eps^2 |b|^2 and
  // x = 2 eps a.b / m, |a +- eps b|^r = m^{r/2} (1 +- x)^{r/2}. For small x the difference of the
  // two powers is the odd binomial series 2 sum_j C(r/2, j) x^j, otherwise it goes through expm1/log1p.
  auto quotient = [eps](double m, double ab, double r) {
    if (m == 0.0 || ab == 0.0) return 0.0;
    const double s = 0.5 * r;
    const double x = std::clamp(2.0 * eps * ab / m, -1.0, 1.0);
    if (std::abs(x) > 0.25)
      return std::pow(m, s) * (std::expm1(s * std::log1p(x)) - std::expm1(s * std::log1p(-x))) / (r * 2.0 * eps);
    // sum over odd j of C(s, j) x^{j-1}
    double coefficient = s, power = 1.0, series = s;
    for (int j = 1; j < 80; j += 2) {
      coefficient *= (s - j) * (s - j - 1) / ((j + 1.0) * (j + 2.0));
      power *= x * x;
      const double term = coefficient * power;
      series += term;
      if (std::abs(term) <= 1e-17 * std::abs(series)) break;
    }
    return 2.0 * std::pow(m, s - 1.0) * ab * series / r;
  };
  const double difference = integrate(model.mesh(), model.quadrature(), [&](const QuadraturePoint& qp) {
    const auto& c = model.coefficients(qp.element, qp.local);
    const Vec2& a = u.gradient(qp.element);
    const Vec2& b = h.gradient(qp.element);
    const double m = dot(a, a) + eps * eps * dot(b, b);
    const double ab = dot(a, b);
    double v = quotient(m, ab, c.p);
    if (c.mu != 0.0) v += c.mu * quotient(m, ab, c.q);
    return v;
  });
  const double directional = apply_A(model, u, h);
  return std::abs(difference - directional) / (1.0 + std::abs(directional));
}

double monotonicity_probe(const DoublePhaseModel& model, const DiscreteFunction& u, const DiscreteFunction& v) {
  require_same_mesh(u, v);
  require_mesh(u, model.mesh());
  return integrate(model.mesh(), model.quadrature(), [&](const QuadraturePoint& qp) {
    const auto& c = model.coefficients(qp.element, qp.local);
    const Vec2& gu = u.gradient(qp.element);
    const Vec2& gv = v.gradient(qp.element);
    const Vec2 diff = flux_scale(norm(gu), c) * gu - flux_scale(norm(gv), c) * gv;
    return dot(diff, gu - gv);
  });
}

double simon_constant_lower(double p) { return std::pow(5.0, 0.5 * (2.0 - p)); }

double simon_constant_upper(double p) { return (p - 1.0) * std::pow(2.0, (p - 1.0) * (p - 2.0) / p); }

SimonResult simon_inequality_check(const Vec2& xi, const Vec2& eta, double p, double tol) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("Simon inequalities need p >= 1");
  auto power_vec = [p](const Vec2& v) {
    const double n = norm(v);
    return n == 0.0 ? Vec2{0.0, 0.0} : std::pow(n, p - 2.0) * v;
  };
  const Vec2 d = xi - eta;
  const double pairing = dot(power_vec(xi) - power_vec(eta), d);
  SimonResult out;
  if (p >= 2.0) {
    out.lhs = simon_constant_lower(p) * std::pow(norm(d), p);
    out.rhs = pairing;
  } else {
    out.lhs = simon_constant_upper(p) * dot(d, d);
    const double s = std::pow(norm(xi), p) + std::pow(norm(eta), p);
    out.rhs = s == 0.0 ? 0.0 : pairing * std::pow(s, (2.0 - p) / p);
  }
  out.passed = out.lhs <= out.rhs + tol * std::max(1.0, std::abs(out.rhs));
  return out;
}

BoundednessEstimate boundedness_estimate(const DoublePhaseModel& model, const DiscreteFunction& u, std::uint64_t seed,
                                         std::size_t random_directions) {
  require_mesh(u, model.mesh());
  BoundednessEstimate out;
  const Eigen::VectorXd free_u = u.free_values();
  if (free_u.isZero(0.0)) return out;

  const double p_minus = model.p_bounds().minus;
  const double q_plus = model.q_bounds().plus;
  const double n = gradient_norm(model, u);
  out.dual_norm_bound = q_plus / p_minus * std::max(std::pow(n, q_plus - 1.0), std::pow(n, p_minus - 1.0));

  const auto& mesh_ptr = model.mesh_ptr();
  const Index nf = model.mesh().num_free();
  auto consider = [&](const Eigen::VectorXd& v_free, std::optional<double> pairing) {
    const DiscreteFunction v = DiscreteFunction::from_free(mesh_ptr, v_free);
    const double vn = gradient_norm(model, v);
    if (!(vn > 0.0)) return;
    const double a = pairing ? *pairing : apply_A(model, u, v);
    out.empirical_sup = std::max(out.empirical_sup, std::abs(a) / vn);
    ++out.directions;
  };

  const Eigen::VectorXd hats = apply_A_basis(model, u);
  for (Index i = 0; i < nf; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nf);
    e[i] = 1.0;
    consider(e, hats[i]);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t k = 0; k < random_directions; ++k) {
    Eigen::VectorXd v(nf);
    for (Index i = 0; i < nf; ++i) v[i] = unit(rng);
    consider(v, std::nullopt);
  }
  consider(free_u, std::nullopt);

  out.passed = out.empirical_sup <= out.dual_norm_bound * (1.0 + 1e-10) + 1e-14;
  return out;
}

}  // namespace dpkit
