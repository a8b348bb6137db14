#include "dphase/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dphase/error.hpp"
#include "dphase/space.hpp"

namespace dphase {
namespace {

// |z|^{r-2} z with the continuous extension 0 at z = 0 (r > 1).
double signed_pow(double z, double r) {
  if (z == 0.0) return 0.0;
  return std::copysign(std::pow(std::fabs(z), r - 1.0), z);
}

void require_positive(const DiscreteFunction& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0)) {
      throw Error(ErrorCode::Domain, "weak form needs u > 0, node " + std::to_string(i) + " has " +
                                         std::to_string(u[i]));
    }
  }
}

}  // namespace

EnergyValue energy(const Discretization& disc, const DiscreteFunction& u, double lambda) {
  const auto mb = modular_breakdown(disc, u);
  EnergyValue e;
  e.kinetic_p = (mb.grad_p + mb.mass_p_alpha) / disc.p();
  e.kinetic_q_mu = mb.grad_q_mu / disc.q();
  e.boundary = mb.bdry_pstar_beta / disc.p_lower_star();
  e.singular = -mb.zeta_sing / (1.0 - disc.kappa());
  e.superlinear = -lambda * mb.mass_q1 / disc.q1();
  e.total = e.kinetic_p + e.kinetic_q_mu + e.boundary + e.singular + e.superlinear;
  return e;
}

std::vector<double> operator_action(const Discretization& disc, const DiscreteFunction& u) {
  disc.check(u);
  const Mesh& mesh = disc.mesh();
  const auto vals = u.values();
  const double p = disc.p(), q = disc.q(), pl = disc.p_lower_star();
  std::vector<double> out(vals.size(), 0.0);
  const auto tris = mesh.triangles();
  const auto mu = disc.mu_cell();
  for (std::size_t k = 0; k < tris.size(); ++k) {
    const Triangle& t = tris[k];
    double gx = 0.0, gy = 0.0;
    for (int j = 0; j < 3; ++j) {
      gx += vals[t.v[j]] * t.bx[j];
      gy += vals[t.v[j]] * t.by[j];
    }
    const double g = std::hypot(gx, gy);
    if (g == 0.0) continue;
    const double w = t.area * (std::pow(g, p - 2.0) + mu[k] * std::pow(g, q - 2.0));
    for (int j = 0; j < 3; ++j) out[t.v[j]] += w * (gx * t.bx[j] + gy * t.by[j]);
  }
  const auto m = mesh.node_weights();
  const auto s = mesh.boundary_weights();
  const auto alpha = disc.alpha_node();
  const auto beta = disc.beta_node();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    out[i] += m[i] * alpha[i] * signed_pow(vals[i], p);
    if (s[i] > 0.0) out[i] += s[i] * beta[i] * signed_pow(vals[i], pl);
  }
  return out;
}

double apply_operator_A(const Discretization& disc, const DiscreteFunction& u, const DiscreteFunction& h) {
  disc.check(h);
  const auto a = operator_action(disc, u);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * h[i];
  return sum;
}

EnergyGradient energy_gradient(const Discretization& disc, const DiscreteFunction& u, double lambda,
                               double floor) {
  EnergyGradient g;
  g.values = operator_action(disc, u);
  const auto m = disc.mesh().node_weights();
  const auto zeta = disc.zeta_node();
  const double kappa = disc.kappa(), q1 = disc.q1();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = u[i];
    if (ui < floor || ui <= 0.0) g.floored_nodes.push_back(i);
    const double base = std::max(ui, floor);
    if (base > 0.0) g.values[i] -= m[i] * zeta[i] * std::pow(base, -kappa);
    g.values[i] -= lambda * m[i] * signed_pow(ui, q1);
  }
  return g;
}

std::vector<double> hat_norms_1p(const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const double p = disc.p();
  std::vector<double> acc(mesh.node_count(), 0.0);
  for (const auto& t : mesh.triangles()) {
    for (int j = 0; j < 3; ++j) acc[t.v[j]] += t.area * std::pow(std::hypot(t.bx[j], t.by[j]), p);
  }
  const auto m = mesh.node_weights();
  const auto alpha = disc.alpha_node();
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::pow(acc[i] + m[i] * alpha[i], 1.0 / p);
  return acc;
}

ResidualReport weak_residual(const Discretization& disc, const DiscreteFunction& u, double lambda) {
  disc.check(u);
  require_positive(u);
  const auto op = operator_action(disc, u);
  const auto norms = hat_norms_1p(disc);
  const auto m = disc.mesh().node_weights();
  const auto zeta = disc.zeta_node();
  ResidualReport rep;
  rep.residual_norm = -1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double sing = m[i] * zeta[i] * std::pow(u[i], -disc.kappa());
    const double sup = lambda * m[i] * std::pow(u[i], disc.q1() - 1.0);
    const double r = std::fabs(op[i] - sing - sup) / norms[i];
    if (r > rep.residual_norm) {
      rep.residual_norm = r;
      rep.worst_node = i;
      rep.operator_term = op[i] / norms[i];
      rep.singular_term = sing / norms[i];
      rep.superlinear_term = sup / norms[i];
    }
  }
  if (rep.residual_norm < 0.0) rep.residual_norm = 0.0;
  return rep;
}

double weak_defect(const Discretization& disc, const DiscreteFunction& u, double lambda, const DiscreteFunction& h) {
  disc.check(u);
  disc.check(h);
  require_positive(u);
  const auto op = operator_action(disc, u);
  const auto m = disc.mesh().node_weights();
  const auto zeta = disc.zeta_node();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double sing = m[i] * zeta[i] * std::pow(u[i], -disc.kappa());
    const double sup = lambda * m[i] * std::pow(u[i], disc.q1() - 1.0);
    sum += (op[i] - sing - sup) * h[i];
  }
  return sum;
}

}  // namespace dphase
