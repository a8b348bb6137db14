#include "dphase/fibering.hpp"

#include <cmath>

#include "dphase/error.hpp"
#include "dphase/roots.hpp"
#include "dphase/space.hpp"

namespace dphase {
namespace {

constexpr double kRootTol = 1e-12;

void require_positive_t(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::Domain, "fiber maps need t > 0");
}

// b t^r with b = 0 contributing exactly 0.
double term(double coeff, double t, double r) { return coeff == 0.0 ? 0.0 : coeff * std::pow(t, r); }

}  // namespace

FiberExponents fiber_exponents(const Discretization& disc) {
  return {disc.p(), disc.q(), disc.p_lower_star(), disc.q1(), disc.kappa()};
}

FiberTerms fiber_terms(const Discretization& disc, const DiscreteFunction& u) {
  const auto mb = modular_breakdown(disc, u);
  FiberTerms ft;
  ft.a = mb.grad_p + mb.mass_p_alpha;
  ft.b = mb.grad_q_mu;
  ft.c = mb.bdry_pstar_beta;
  ft.d = mb.zeta_sing;
  ft.e = mb.mass_q1;
  ft.ex = fiber_exponents(disc);
  return ft;
}

double psi_value(const FiberTerms& ft, double lambda, double t) {
  if (t == 0.0) return 0.0;
  return psi_derivatives(ft, lambda, t).psi;
}

PsiValues psi_derivatives(const FiberTerms& ft, double lambda, double t) {
  require_positive_t(t);
  const auto& x = ft.ex;
  const double le = lambda * ft.e;
  PsiValues v{};
  v.psi = term(ft.a / x.p, t, x.p) + term(ft.b / x.q, t, x.q) + term(ft.c / x.p_lower_star, t, x.p_lower_star) -
          term(ft.d / (1.0 - x.kappa), t, 1.0 - x.kappa) - term(le / x.q1, t, x.q1);
  v.dpsi = term(ft.a, t, x.p - 1.0) + term(ft.b, t, x.q - 1.0) + term(ft.c, t, x.p_lower_star - 1.0) -
           term(ft.d, t, -x.kappa) - term(le, t, x.q1 - 1.0);
  v.ddpsi = term((x.p - 1.0) * ft.a, t, x.p - 2.0) + term((x.q - 1.0) * ft.b, t, x.q - 2.0) +
            term((x.p_lower_star - 1.0) * ft.c, t, x.p_lower_star - 2.0) + term(x.kappa * ft.d, t, -x.kappa - 1.0) -
            term((x.q1 - 1.0) * le, t, x.q1 - 2.0);
  return v;
}

double eta(const FiberTerms& ft, double t) {
  require_positive_t(t);
  const auto& x = ft.ex;
  return term(ft.a, t, x.p - x.q1) + term(ft.b, t, x.q - x.q1) + term(ft.c, t, x.p_lower_star - x.q1) -
         term(ft.d, t, 1.0 - x.q1 - x.kappa);
}

double eta_derivative(const FiberTerms& ft, double t) {
  require_positive_t(t);
  const auto& x = ft.ex;
  return term((x.p - x.q1) * ft.a, t, x.p - x.q1 - 1.0) + term((x.q - x.q1) * ft.b, t, x.q - x.q1 - 1.0) +
         term((x.p_lower_star - x.q1) * ft.c, t, x.p_lower_star - x.q1 - 1.0) +
         term((x.q1 + x.kappa - 1.0) * ft.d, t, -x.q1 - x.kappa);
}

double eta_tilde(const FiberTerms& ft, double t) {
  require_positive_t(t);
  const auto& x = ft.ex;
  return term(ft.a, t, x.p - x.q1) - term(ft.d, t, 1.0 - x.q1 - x.kappa);
}

double xi(const FiberTerms& ft, double t) {
  require_positive_t(t);
  const auto& x = ft.ex;
  return term((x.q1 - x.p) * ft.a, t, x.p + x.kappa - 1.0) + term((x.q1 - x.q) * ft.b, t, x.q + x.kappa - 1.0) +
         term((x.q1 - x.p_lower_star) * ft.c, t, x.p_lower_star + x.kappa - 1.0);
}

TildeMax t_tilde_circ(const FiberTerms& ft) {
  if (!(ft.a > 0.0) || !(ft.d > 0.0)) {
    throw Error(ErrorCode::Domain, "eta_tilde maximizer needs ||u||_{1,p} > 0 and int zeta |u|^{1-kappa} > 0");
  }
  const auto& x = ft.ex;
  const double pk = x.p + x.kappa - 1.0;
  const double qk = x.q1 + x.kappa - 1.0;
  const double qp = x.q1 - x.p;
  TildeMax r{};
  r.t_tilde_circ = std::pow(qk * ft.d / (qp * ft.a), 1.0 / pk);
  r.eta_tilde_max = eta_tilde(ft, r.t_tilde_circ);
  r.eta_tilde_max_closed_form =
      (pk / qp) * std::pow(qp / qk, qk / pk) * std::pow(ft.a, qk / pk) / std::pow(ft.d, qp / pk);
  return r;
}

double t_circ(const FiberTerms& ft) {
  if (!(ft.d > 0.0) || !(ft.a > 0.0 || ft.b > 0.0 || ft.c > 0.0)) {
    throw Error(ErrorCode::Domain, "degenerate fiber terms: need d > 0 and one of a, b, c > 0");
  }
  const double target = (ft.ex.q1 + ft.ex.kappa - 1.0) * ft.d;
  const auto g = [&](double t) { return xi(ft, t) - target; };
  const double t0 = ft.a > 0.0 ? t_tilde_circ(ft).t_tilde_circ : 1.0;
  const double g0 = g(t0);
  if (g0 == 0.0) return t0;
  const auto br = roots::expand_bracket(g, t0, g0, /*toward_larger=*/g0 < 0.0);
  if (!br) throw Error(ErrorCode::Bracket, "t_circ: could not bracket the root of xi");
  return roots::solve_bracketed(g, *br, kRootTol * target).x;
}

FiberRoots fiber_roots(const FiberTerms& ft, double lambda) {
  if (!(ft.e > 0.0)) throw Error(ErrorCode::Domain, "fiber roots need ||u||_{q1} > 0");
  if (!(lambda > 0.0)) throw Error(ErrorCode::Domain, "fiber roots need lambda > 0");
  FiberRoots r;
  r.t_circ = t_circ(ft);
  r.eta_circ = eta(ft, r.t_circ);
  const double level = lambda * ft.e;
  const double gap = r.eta_circ - level;
  if (std::fabs(gap) <= kTangentTol * level) {
    r.kind = RootCase::Tangent;
    r.t1 = r.t2 = r.t_circ;
    return r;
  }
  if (gap < 0.0) {
    r.kind = RootCase::None;
    return r;
  }
  const auto h = [&](double t) { return eta(ft, t) - level; };
  const auto lower = roots::expand_bracket(h, r.t_circ, gap, /*toward_larger=*/false);
  const auto upper = roots::expand_bracket(h, r.t_circ, gap, /*toward_larger=*/true);
  if (!lower || !upper) throw Error(ErrorCode::Bracket, "fiber roots: bracket expansion failed");
  r.t1 = roots::solve_bracketed(h, *lower, kRootTol * level).x;
  r.t2 = roots::solve_bracketed(h, *upper, kRootTol * level).x;
  r.kind = RootCase::TwoRoots;
  return r;
}

std::string_view to_string(NehariSet s) {
  switch (s) {
    case NehariSet::NotOnNehari: return "NotOnNehari";
    case NehariSet::Nplus: return "Nplus";
    case NehariSet::Nzero: return "Nzero";
    case NehariSet::Nminus: return "Nminus";
  }
  return "?";
}

NehariClass classify_nehari(const FiberTerms& ft, double lambda, double tol) {
  const PsiValues v = psi_derivatives(ft, lambda, 1.0);
  const double scale = ft.a + ft.b + ft.c + ft.d + lambda * ft.e;
  NehariClass c;
  c.dpsi = v.dpsi;
  c.ddpsi = v.ddpsi;
  c.tol = tol;
  if (std::fabs(v.dpsi) > tol * scale) {
    c.set = NehariSet::NotOnNehari;
  } else if (std::fabs(v.ddpsi) <= tol * scale) {
    c.set = NehariSet::Nzero;
  } else {
    c.set = v.ddpsi > 0.0 ? NehariSet::Nplus : NehariSet::Nminus;
  }
  return c;
}

NehariClass classify_nehari(const Discretization& disc, const DiscreteFunction& u, double lambda, double tol) {
  disc.check(u);
  bool nonzero = false;
  for (double v : u.values()) nonzero = nonzero || v != 0.0;
  if (!nonzero) throw Error(ErrorCode::InvalidArgument, "Nehari classification needs u != 0");
  return classify_nehari(fiber_terms(disc, u), lambda, tol);
}

}  // namespace dphase
