#include "dphase/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dphase/error.hpp"

namespace dphase {

DiscreteFunction::DiscreteFunction(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::InvalidArgument, "non-finite nodal value at node " + std::to_string(i));
    }
  }
}

DiscreteFunction DiscreteFunction::scaled(double s) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= s;
  return DiscreteFunction(std::move(v));
}

double DiscreteFunction::min() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double DiscreteFunction::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

Discretization::Discretization(std::shared_ptr<const Mesh> mesh, ProblemData data)
    : mesh_(std::move(mesh)), data_(std::move(data)), exps_(data_.exponents()) {
  if (!mesh_) throw Error(ErrorCode::InvalidArgument, "discretization needs a mesh");
  const auto nodes = mesh_->nodes();
  const std::size_t n = nodes.size();
  mu_node_.resize(n);
  alpha_node_.resize(n);
  zeta_node_.resize(n);
  beta_node_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    mu_node_[i] = data_.mu(nodes[i]);
    alpha_node_[i] = data_.alpha(nodes[i]);
    zeta_node_[i] = data_.zeta(nodes[i]);
  }
  for (auto i : mesh_->boundary_nodes()) beta_node_[i] = data_.beta(nodes[i]);
  mu_cell_.reserve(mesh_->triangle_count());
  for (const auto& t : mesh_->triangles()) mu_cell_.push_back(data_.mu(t.centroid));
}

void Discretization::check(const DiscreteFunction& u) const {
  if (u.size() != node_count()) {
    throw Error(ErrorCode::InvalidArgument, "function has " + std::to_string(u.size()) +
                                                " nodal values, mesh has " + std::to_string(node_count()));
  }
}

}  // namespace dphase
