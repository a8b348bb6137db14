#pragma once

#include <functional>
#include <span>

#include "dphase/discretization.hpp"

namespace dphase {

/// The six quadrature integrals every norm, energy and Nehari test is built from.
struct ModularBreakdown {
  double grad_p = 0.0;           // sum_T |T| |grad u|^p
  double grad_q_mu = 0.0;        // sum_T |T| mu(c_T) |grad u|^q
  double mass_p_alpha = 0.0;     // sum_i m_i alpha_i |u_i|^p
  double bdry_pstar_beta = 0.0;  // sum_i s_i beta_i |u_i|^{p_*}
  double zeta_sing = 0.0;        // sum_i m_i zeta_i |u_i|^{1-kappa}
  double mass_q1 = 0.0;          // sum_i m_i |u_i|^{q1}

  /// rho(u): the modular of the norm ||.||.
  double rho() const { return grad_p + grad_q_mu + mass_p_alpha + bdry_pstar_beta; }
};

ModularBreakdown modular_breakdown(const Discretization& disc, const DiscreteFunction& u);

/// rho_H applied to |grad u| (per triangle, mu at centroids).
double modular_H_gradient(const Discretization& disc, const DiscreteFunction& u);
/// rho_H applied to the nodal values |u_i| (lumped weights, mu at nodes).
double modular_H_values(const Discretization& disc, const DiscreteFunction& u);

/// Luxemburg norm inf{tau > 0 : rho(u/tau) <= 1} for a map tau -> rho(u/tau)
/// that is strictly decreasing from +inf to 0. `modular_at_one` = rho(u);
/// zero means u = 0 and the norm is 0 by definition. The root satisfies
/// |rho(u/tau) - 1| <= 1e-12. Throws Error{Bracket} if 200 doublings or
/// halvings of tau from 1 do not bracket the root.
double luxemburg_norm(const std::function<double(double)>& modular_of_tau, double modular_at_one);

/// ||u||: Luxemburg norm of rho.
double norm_custom(const Discretization& disc, const DiscreteFunction& u);
/// ||u||_{1,p} = (||grad u||_p^p + int alpha |u|^p)^{1/p}.
double norm_1p(const Discretization& disc, const DiscreteFunction& u);
/// ||grad u||_H + ||u||_{p,alpha} + ||u||_{p_*,beta,boundary}.
double norm_circ(const Discretization& disc, const DiscreteFunction& u);
/// Joint Luxemburg norm of the gradient, alpha-weighted and boundary modulars.
double norm_star(const Discretization& disc, const DiscreteFunction& u);

/// ||grad u||_H alone.
double norm_gradient_H(const Discretization& disc, const DiscreteFunction& u);
/// (int theta |u|^r)^{1/r}; zero when theta vanishes identically.
double weighted_seminorm(std::span<const double> weights, std::span<const double> theta,
                         const DiscreteFunction& u, double r);

}  // namespace dphase
