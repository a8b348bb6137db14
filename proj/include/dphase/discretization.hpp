#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dphase/mesh.hpp"
#include "dphase/problem.hpp"

namespace dphase {

/// Nodal values of a continuous piecewise-linear function on a Mesh.
class DiscreteFunction {
 public:
  DiscreteFunction() = default;
  /// Throws Error{InvalidArgument} on non-finite entries.
  explicit DiscreteFunction(std::vector<double> values);
  static DiscreteFunction constant(std::size_t n, double c) { return DiscreteFunction(std::vector<double>(n, c)); }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  DiscreteFunction scaled(double s) const;
  double min() const;
  double max() const;

 private:
  std::vector<double> values_;
};

/// Mesh + problem data with every weight field sampled where the quadrature
/// needs it: mu at centroids (gradient terms) and at nodes, alpha and zeta at
/// nodes, beta at boundary nodes (0 elsewhere).
class Discretization {
 public:
  /// Throws Error{Eval} if a field cannot be evaluated at a sample point and
  /// Error{Domain} if the exponents are undefined.
  Discretization(std::shared_ptr<const Mesh> mesh, ProblemData data);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const ProblemData& data() const { return data_; }
  std::size_t node_count() const { return mesh_->node_count(); }

  double p() const { return data_.p; }
  double q() const { return data_.q; }
  double kappa() const { return data_.kappa; }
  double q1() const { return data_.q1; }
  double p_star() const { return exps_.p_star; }
  double p_lower_star() const { return exps_.p_lower_star; }

  std::span<const double> mu_cell() const { return mu_cell_; }
  std::span<const double> mu_node() const { return mu_node_; }
  std::span<const double> alpha_node() const { return alpha_node_; }
  std::span<const double> beta_node() const { return beta_node_; }
  std::span<const double> zeta_node() const { return zeta_node_; }

  /// Throws Error{InvalidArgument} if `u` does not live on this mesh.
  void check(const DiscreteFunction& u) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  ProblemData data_;
  CriticalExponents exps_;
  std::vector<double> mu_cell_, mu_node_, alpha_node_, beta_node_, zeta_node_;
};

}  // namespace dphase
