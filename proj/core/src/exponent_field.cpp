#include "dpkit/exponent_field.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "dpkit/errors.hpp"

namespace dpkit {

ExponentField ExponentField::constant(double value) {
  if (!std::isfinite(value)) throw InvalidInput("constant field value must be finite");
  ExponentField f;
  f.kind_ = Kind::constant;
  f.value_ = value;
  std::ostringstream label;
  label << "constant(" << value << ")";
  f.label_ = label.str();
  return f;
}

ExponentField ExponentField::affine(Vec2 slope, double offset) {
  if (!std::isfinite(offset) || !std::isfinite(slope[0]) || !std::isfinite(slope[1]))
    throw InvalidInput("affine field coefficients must be finite");
  ExponentField f;
  f.kind_ = Kind::affine;
  f.slope_ = slope;
  f.value_ = offset;
  f.label_ = "affine";
  return f;
}

ExponentField ExponentField::table(std::shared_ptr<const Mesh> mesh, std::vector<double> nodal_values) {
  if (!mesh || mesh->empty()) throw InvalidInput("tabulated field needs a non-empty mesh");
  if (static_cast<Index>(nodal_values.size()) != mesh->num_nodes())
    throw InvalidInput("tabulated field needs one value per mesh node");
  for (double v : nodal_values)
    if (!std::isfinite(v)) throw InvalidInput("tabulated field values must be finite");
  ExponentField f;
  f.kind_ = Kind::table;
  f.table_mesh_ = std::move(mesh);
  f.table_ = std::move(nodal_values);
  f.label_ = "table";
  return f;
}

ExponentField ExponentField::callback(std::function<double(const Point&)> fn, std::string label) {
  if (!fn) throw InvalidInput("callback field needs a callable");
  ExponentField f;
  f.kind_ = Kind::callback;
  f.callback_ = std::move(fn);
  f.label_ = std::move(label);
  return f;
}

double ExponentField::at(const Point& x) const {
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::affine:
      return dot(slope_, x) + value_;
    case Kind::callback:
      return callback_(x);
    case Kind::table: {
      const auto hit = table_mesh_->locate(x);
      if (!hit) throw DomainError("point lies outside the tabulated field's mesh");
      const auto& el = table_mesh_->element(hit->first);
      double v = 0.0;
      for (int k = 0; k < table_mesh_->vertices_per_element(); ++k)
        v += hit->second[static_cast<std::size_t>(k)] * table_[static_cast<std::size_t>(el[k])];
      return v;
    }
  }
  return value_;
}

double ExponentField::at(const Mesh& mesh, Index element, const Barycentric& bary, const Point& x) const {
  if (kind_ != Kind::table || &mesh != table_mesh_.get()) return at(x);
  const auto& el = mesh.element(element);
  double v = 0.0;
  for (int k = 0; k < mesh.vertices_per_element(); ++k)
    v += bary[static_cast<std::size_t>(k)] * table_[static_cast<std::size_t>(el[k])];
  return v;
}

double ExponentField::at_node(const Mesh& mesh, Index node) const {
  if (kind_ == Kind::table && &mesh == table_mesh_.get()) return table_[static_cast<std::size_t>(node)];
  return at(mesh.node(node));
}

SampleSet::SampleSet(std::shared_ptr<const Mesh> mesh, const Quadrature& quadrature) : mesh_(std::move(mesh)) {
  if (!mesh_ || mesh_->empty()) throw InvalidInput("cannot sample on an empty mesh");
  points_.reserve(static_cast<std::size_t>(mesh_->num_nodes()) +
                  static_cast<std::size_t>(mesh_->num_elements()) * quadrature.size());
  for (Index i = 0; i < mesh_->num_nodes(); ++i) points_.push_back({mesh_->node(i), -1, {0.0, 0.0, 0.0}, i});
  for (Index e = 0; e < mesh_->num_elements(); ++e)
    for (const auto& bary : quadrature.points()) points_.push_back({mesh_->map(e, bary), e, bary, -1});
}

SampleSet::SampleSet(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
  if (!mesh_ || mesh_->empty()) throw InvalidInput("cannot sample on an empty mesh");
  for (Index i = 0; i < mesh_->num_nodes(); ++i) points_.push_back({mesh_->node(i), -1, {0.0, 0.0, 0.0}, i});
}

double SampleSet::evaluate(const ExponentField& field, std::size_t k) const {
  const auto& s = points_[k];
  return s.node >= 0 ? field.at_node(*mesh_, s.node) : field.at(*mesh_, s.element, s.bary, s.x);
}

std::vector<double> SampleSet::evaluate(const ExponentField& field) const {
  std::vector<double> out(points_.size());
  for (std::size_t k = 0; k < points_.size(); ++k) out[k] = evaluate(field, k);
  return out;
}

Bounds sample_bounds(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("no samples to bound");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

Bounds field_bounds(ExponentField& field, std::shared_ptr<const Mesh> mesh, int quadrature_order) {
  if (!mesh || mesh->empty()) throw InvalidInput("field bounds need a non-empty mesh");
  const Quadrature quadrature(mesh->dimension(), quadrature_order);
  const SampleSet samples(std::move(mesh), quadrature);
  const auto values = samples.evaluate(field);
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidInput("field sample is not finite");
  const Bounds b = sample_bounds(values);
  field.cache_bounds(b);
  return b;
}

}  // namespace dpkit
