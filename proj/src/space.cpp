#include "dphase/space.hpp"

#include <cmath>
#include <vector>

#include "dphase/error.hpp"
#include "dphase/roots.hpp"

namespace dphase {
namespace {

constexpr double kLuxemburgTol = 1e-12;

double gradient_norm(const Triangle& t, std::span<const double> u) {
  double gx = 0.0, gy = 0.0;
  for (int k = 0; k < 3; ++k) {
    gx += u[t.v[k]] * t.bx[k];
    gy += u[t.v[k]] * t.by[k];
  }
  return std::hypot(gx, gy);
}

// Powers of a nonnegative base; 0^r = 0 for r > 0.
double pw(double base, double r) { return base == 0.0 ? 0.0 : std::pow(base, r); }

}  // namespace

ModularBreakdown modular_breakdown(const Discretization& disc, const DiscreteFunction& u) {
  disc.check(u);
  const Mesh& mesh = disc.mesh();
  const auto vals = u.values();
  const double p = disc.p(), q = disc.q();
  ModularBreakdown mb;
  const auto tris = mesh.triangles();
  const auto mu = disc.mu_cell();
  for (std::size_t k = 0; k < tris.size(); ++k) {
    const double g = gradient_norm(tris[k], vals);
    mb.grad_p += tris[k].area * pw(g, p);
    mb.grad_q_mu += tris[k].area * mu[k] * pw(g, q);
  }
  const auto m = mesh.node_weights();
  const auto s = mesh.boundary_weights();
  const auto alpha = disc.alpha_node();
  const auto beta = disc.beta_node();
  const auto zeta = disc.zeta_node();
  const double pl = disc.p_lower_star(), sing = 1.0 - disc.kappa(), q1 = disc.q1();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double a = std::fabs(vals[i]);
    mb.mass_p_alpha += m[i] * alpha[i] * pw(a, p);
    if (s[i] > 0.0) mb.bdry_pstar_beta += s[i] * beta[i] * pw(a, pl);
    mb.zeta_sing += m[i] * zeta[i] * pw(a, sing);
    mb.mass_q1 += m[i] * pw(a, q1);
  }
  return mb;
}

double modular_H_gradient(const Discretization& disc, const DiscreteFunction& u) {
  const auto mb = modular_breakdown(disc, u);
  return mb.grad_p + mb.grad_q_mu;
}

double modular_H_values(const Discretization& disc, const DiscreteFunction& u) {
  disc.check(u);
  const auto m = disc.mesh().node_weights();
  const auto mu = disc.mu_node();
  const auto vals = u.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double a = std::fabs(vals[i]);
    sum += m[i] * (pw(a, disc.p()) + mu[i] * pw(a, disc.q()));
  }
  return sum;
}

double luxemburg_norm(const std::function<double(double)>& modular_of_tau, double modular_at_one) {
  if (modular_at_one == 0.0) return 0.0;
  const auto f = [&](double tau) { return modular_of_tau(tau) - 1.0; };
  const double f1 = modular_at_one - 1.0;
  if (f1 == 0.0) return 1.0;
  // f decreases in tau: grow tau while f > 0, shrink while f < 0.
  const auto br = roots::expand_bracket(f, 1.0, f1, /*toward_larger=*/f1 > 0.0);
  if (!br) {
    throw Error(ErrorCode::Bracket,
                "Luxemburg norm: no bracket after 200 expansions (modular not monotone or degenerate)");
  }
  return roots::solve_bracketed(f, *br, kLuxemburgTol).x;
}

namespace {

// rho(u/tau) for a modular that is a sum of c_k tau^{-r_k}.
struct PowerSum {
  double c[4];
  double r[4];
  int n = 0;
  void add(double coeff, double exponent) {
    if (coeff != 0.0) {
      c[n] = coeff;
      r[n] = exponent;
      ++n;
    }
  }
  double at_one() const {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += c[k];
    return s;
  }
  double operator()(double tau) const {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += c[k] * std::pow(tau, -r[k]);
    return s;
  }
};

double power_sum_norm(const PowerSum& ps) {
  return luxemburg_norm([&ps](double tau) { return ps(tau); }, ps.at_one());
}

PowerSum gradient_power_sum(const Discretization& disc, const ModularBreakdown& mb) {
  PowerSum ps;
  ps.add(mb.grad_p, disc.p());
  ps.add(mb.grad_q_mu, disc.q());
  return ps;
}

}  // namespace

double norm_custom(const Discretization& disc, const DiscreteFunction& u) {
  const auto mb = modular_breakdown(disc, u);
  PowerSum ps = gradient_power_sum(disc, mb);
  ps.add(mb.mass_p_alpha, disc.p());
  ps.add(mb.bdry_pstar_beta, disc.p_lower_star());
  return power_sum_norm(ps);
}

double norm_1p(const Discretization& disc, const DiscreteFunction& u) {
  const auto mb = modular_breakdown(disc, u);
  return pw(mb.grad_p + mb.mass_p_alpha, 1.0 / disc.p());
}

double norm_gradient_H(const Discretization& disc, const DiscreteFunction& u) {
  return power_sum_norm(gradient_power_sum(disc, modular_breakdown(disc, u)));
}

double weighted_seminorm(std::span<const double> weights, std::span<const double> theta,
                         const DiscreteFunction& u, double r) {
  double sum = 0.0;
  const auto vals = u.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (weights[i] == 0.0 || theta[i] == 0.0) continue;
    sum += weights[i] * theta[i] * pw(std::fabs(vals[i]), r);
  }
  return pw(sum, 1.0 / r);
}

double norm_circ(const Discretization& disc, const DiscreteFunction& u) {
  disc.check(u);
  const Mesh& mesh = disc.mesh();
  return norm_gradient_H(disc, u) + weighted_seminorm(mesh.node_weights(), disc.alpha_node(), u, disc.p()) +
         weighted_seminorm(mesh.boundary_weights(), disc.beta_node(), u, disc.p_lower_star());
}

double norm_star(const Discretization& disc, const DiscreteFunction& u) {
  // Joint modular with (r1, theta1, r2, theta2) = (p, alpha, p_*, beta),
  // evaluated directly on u / tau rather than through precomputed integrals.
  disc.check(u);
  const Mesh& mesh = disc.mesh();
  const auto tris = mesh.triangles();
  std::vector<double> grad(tris.size());
  for (std::size_t k = 0; k < tris.size(); ++k) grad[k] = gradient_norm(tris[k], u.values());
  const auto vals = u.values();
  const auto m = mesh.node_weights();
  const auto s = mesh.boundary_weights();
  const auto mu = disc.mu_cell();
  const auto alpha = disc.alpha_node();
  const auto beta = disc.beta_node();
  const double p = disc.p(), q = disc.q(), r1 = disc.p(), r2 = disc.p_lower_star();
  const auto joint = [&](double tau) {
    double sum = 0.0;
    for (std::size_t k = 0; k < tris.size(); ++k) {
      const double g = grad[k] / tau;
      sum += tris[k].area * (pw(g, p) + mu[k] * pw(g, q));
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double a = std::fabs(vals[i]) / tau;
      sum += m[i] * alpha[i] * pw(a, r1) + s[i] * beta[i] * pw(a, r2);
    }
    return sum;
  };
  return luxemburg_norm(joint, joint(1.0));
}

}  // namespace dphase
