#pragma once

#include <cstddef>
#include <vector>

#include "dphase/discretization.hpp"

namespace dphase {

/// Theta_lambda(u) and its five signed terms.
struct EnergyValue {
  double total = 0.0;
  double kinetic_p = 0.0;     // (1/p) ||u||_{1,p}^p
  double kinetic_q_mu = 0.0;  // (1/q) ||grad u||_{q,mu}^q
  double boundary = 0.0;      // (1/p_*) ||u||_{p_*,beta,boundary}^{p_*}
  double singular = 0.0;      // -(1/(1-kappa)) int zeta |u|^{1-kappa}
  double superlinear = 0.0;   // -(lambda/q1) ||u||_{q1}^{q1}
};

EnergyValue energy(const Discretization& disc, const DiscreteFunction& u, double lambda);

/// <A(u), e_i> for every nodal hat function e_i. |z|^{r-2} z is taken as 0 at z = 0.
std::vector<double> operator_action(const Discretization& disc, const DiscreteFunction& u);

/// <A(u), h>.
double apply_operator_A(const Discretization& disc, const DiscreteFunction& u, const DiscreteFunction& h);

struct EnergyGradient {
  std::vector<double> values;
  /// Nodes where u_i < floor, i.e. where max(u_i, floor) replaced u_i in u^{-kappa}.
  std::vector<std::size_t> floored_nodes;
  bool floor_active() const { return !floored_nodes.empty(); }
};

inline constexpr double kDefaultSingularFloor = 1e-10;

/// Nodal partial derivatives of the discrete Theta_lambda, with the singular
/// derivative zeta u^{-kappa} evaluated at max(u_i, floor).
EnergyGradient energy_gradient(const Discretization& disc, const DiscreteFunction& u, double lambda,
                               double floor = kDefaultSingularFloor);

struct ResidualReport {
  /// max_i |defect_i| / ||e_i||_{1,p} over the nodal hat functions e_i.
  double residual_norm = 0.0;
  std::size_t worst_node = 0;
  // Normalized terms of the weak form at worst_node.
  double operator_term = 0.0;     // <A(u), e_i>
  double singular_term = 0.0;     // int zeta u^{-kappa} e_i
  double superlinear_term = 0.0;  // lambda int u^{q1-1} e_i
};

/// Throws Error{Domain} if some nodal value is not strictly positive.
ResidualReport weak_residual(const Discretization& disc, const DiscreteFunction& u, double lambda);

/// <A(u), h> - int zeta u^{-kappa} h - lambda int u^{q1-1} h for u > 0.
double weak_defect(const Discretization& disc, const DiscreteFunction& u, double lambda, const DiscreteFunction& h);

/// ||e_i||_{1,p} for every hat function.
std::vector<double> hat_norms_1p(const Discretization& disc);

}  // namespace dphase
