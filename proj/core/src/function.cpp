#include "dpkit/function.hpp"

#include <string>

#include "dpkit/errors.hpp"
#include "dpkit/parallel.hpp"

namespace dpkit {

DiscreteFunction::DiscreteFunction(std::shared_ptr<const Mesh> mesh, Eigen::VectorXd coefficients)
    : mesh_(std::move(mesh)), coefficients_(std::move(coefficients)) {
  if (!mesh_) throw InvalidInput("discrete function needs a mesh");
  if (coefficients_.size() != mesh_->num_nodes())
    throw InvalidInput("coefficient count " + std::to_string(coefficients_.size()) + " does not match node count " +
                       std::to_string(mesh_->num_nodes()));
  if (!coefficients_.allFinite()) throw InvalidInput("discrete function coefficients must be finite");

  gradients_.resize(static_cast<std::size_t>(mesh_->num_elements()));
  const int nv = mesh_->vertices_per_element();
  for (Index e = 0; e < mesh_->num_elements(); ++e) {
    Vec2 g{0.0, 0.0};
    const auto& el = mesh_->element(e);
    for (int k = 0; k < nv; ++k) g = g + coefficients_[el[k]] * mesh_->basis_gradient(e, k);
    gradients_[static_cast<std::size_t>(e)] = g;
  }
}

DiscreteFunction DiscreteFunction::zero(std::shared_ptr<const Mesh> mesh) {
  const Index n = mesh->num_nodes();
  return DiscreteFunction(std::move(mesh), Eigen::VectorXd::Zero(n));
}

DiscreteFunction DiscreteFunction::from_free(std::shared_ptr<const Mesh> mesh, const Eigen::VectorXd& free_values) {
  if (free_values.size() != mesh->num_free()) throw InvalidInput("free value count does not match the mesh");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(mesh->num_nodes());
  const auto free = mesh->free_nodes();
  for (std::size_t i = 0; i < free.size(); ++i) c[free[i]] = free_values[static_cast<Index>(i)];
  return DiscreteFunction(std::move(mesh), std::move(c));
}

double DiscreteFunction::value(Index e, const Barycentric& bary) const {
  const auto& el = mesh_->element(e);
  double v = 0.0;
  for (int k = 0; k < mesh_->vertices_per_element(); ++k) v += bary[static_cast<std::size_t>(k)] * coefficients_[el[k]];
  return v;
}

Eigen::VectorXd DiscreteFunction::free_values() const {
  const auto free = mesh_->free_nodes();
  Eigen::VectorXd out(static_cast<Index>(free.size()));
  for (std::size_t i = 0; i < free.size(); ++i) out[static_cast<Index>(i)] = coefficients_[free[i]];
  return out;
}

bool DiscreteFunction::vanishes_on_boundary() const {
  for (Index i = 0; i < mesh_->num_nodes(); ++i)
    if (mesh_->is_boundary(i) && coefficients_[i] != 0.0) return false;
  return true;
}

DiscreteFunction DiscreteFunction::operator+(const DiscreteFunction& other) const {
  require_same_mesh(*this, other);
  return DiscreteFunction(mesh_, coefficients_ + other.coefficients_);
}

DiscreteFunction DiscreteFunction::operator-(const DiscreteFunction& other) const {
  require_same_mesh(*this, other);
  return DiscreteFunction(mesh_, coefficients_ - other.coefficients_);
}

DiscreteFunction DiscreteFunction::scaled(double factor) const { return DiscreteFunction(mesh_, factor * coefficients_); }

void require_same_mesh(const DiscreteFunction& a, const DiscreteFunction& b) {
  if (&a.mesh() != &b.mesh()) throw InvalidInput("functions are defined on different meshes");
}

void require_mesh(const DiscreteFunction& u, const Mesh& mesh) {
  if (&u.mesh() != &mesh) throw InvalidInput("function is defined on a different mesh");
}

DiscreteFunction interpolate(std::shared_ptr<const Mesh> mesh, const std::function<double(const Point&)>& f) {
  Eigen::VectorXd c(mesh->num_nodes());
  for (Index i = 0; i < mesh->num_nodes(); ++i) {
    c[i] = f(mesh->node(i));
    if (!std::isfinite(c[i])) throw InvalidInput("interpolated value is not finite at node " + std::to_string(i));
  }
  return DiscreteFunction(std::move(mesh), std::move(c));
}

double integrate(const Mesh& mesh, const Quadrature& quadrature,
                 const std::function<double(const QuadraturePoint&)>& integrand) {
  if (quadrature.dimension() != mesh.dimension()) throw InvalidInput("quadrature dimension does not match the mesh");
  const auto n = static_cast<std::size_t>(mesh.num_elements());
  std::vector<double> partial(chunk_count(n), 0.0);
  for_each_chunk(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t e = begin; e < end; ++e) {
      const auto el = static_cast<Index>(e);
      const double measure = mesh.measure(el);
      for (std::size_t k = 0; k < quadrature.size(); ++k) {
        const auto& bary = quadrature.point(k);
        const QuadraturePoint qp{el, k, mesh.map(el, bary), bary, measure * quadrature.weight(k)};
        const double v = integrand(qp);
        if (!std::isfinite(v)) throw NumericError("integrand is not finite on element " + std::to_string(e));
        sum += qp.weight * v;
      }
    }
    partial[chunk] = sum;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace dpkit
