#pragma once

// Fibering analysis along rays t -> t u. For a fixed direction u everything
// is a function of five integrals (a, b, c, d, e):
//
//   psi(t)       = a/p t^p + b/q t^q + c/p_* t^{p_*} - d/(1-kappa) t^{1-kappa} - lambda e/q1 t^{q1}
//   eta(t)       = a t^{p-q1} + b t^{q-q1} + c t^{p_*-q1} - d t^{1-q1-kappa}
//   eta_tilde(t) = a t^{p-q1} - d t^{1-q1-kappa}
//   xi(t)        = (q1-p) a t^{p+kappa-1} + (q1-q) b t^{q+kappa-1} + (q1-p_*) c t^{p_*+kappa-1}
//
// with psi'(t) = t^{q1-1} (eta(t) - lambda e). eta rises to its maximum at the
// unique root t_circ of xi(t) = (q1+kappa-1) d and decays afterwards, so
// eta(t) = lambda e has two roots t1 < t_circ < t2 exactly when
// eta(t_circ) > lambda e.

#include <optional>
#include <string_view>

#include "dphase/discretization.hpp"

namespace dphase {

struct FiberExponents {
  double p, q, p_lower_star, q1, kappa;
};

struct FiberTerms {
  double a = 0.0;  // ||u||_{1,p}^p
  double b = 0.0;  // ||grad u||_{q,mu}^q
  double c = 0.0;  // ||u||_{p_*,beta,boundary}^{p_*}
  double d = 0.0;  // int zeta |u|^{1-kappa}
  double e = 0.0;  // ||u||_{q1}^{q1}
  FiberExponents ex{};
};

FiberTerms fiber_terms(const Discretization& disc, const DiscreteFunction& u);
FiberExponents fiber_exponents(const Discretization& disc);

struct PsiValues {
  double psi, dpsi, ddpsi;
};

/// Throws Error{Domain} for t <= 0 (psi alone is 0 at t = 0 via psi_value).
PsiValues psi_derivatives(const FiberTerms& ft, double lambda, double t);
/// psi(t) for t >= 0, with psi(0) = 0.
double psi_value(const FiberTerms& ft, double lambda, double t);

// All three throw Error{Domain} for t <= 0.
double eta(const FiberTerms& ft, double t);
double eta_derivative(const FiberTerms& ft, double t);
double eta_tilde(const FiberTerms& ft, double t);
double xi(const FiberTerms& ft, double t);

struct TildeMax {
  double t_tilde_circ;   // argmax of eta_tilde
  double eta_tilde_max;  // eta_tilde(t_tilde_circ), from the direct evaluation
  double eta_tilde_max_closed_form;
};

/// Closed-form maximizer of eta_tilde. Throws Error{Domain} if a = 0 or d = 0.
TildeMax t_tilde_circ(const FiberTerms& ft);

/// Unique root of xi(t) = (q1+kappa-1) d. Throws Error{Domain} if a = b = c = 0 or d = 0.
double t_circ(const FiberTerms& ft);

enum class RootCase { TwoRoots, Tangent, None };

struct FiberRoots {
  RootCase kind = RootCase::None;
  double t_circ = 0.0;
  double eta_circ = 0.0;  // eta(t_circ), the largest value of eta
  double t1 = 0.0;        // valid for TwoRoots
  double t2 = 0.0;        // valid for TwoRoots
};

inline constexpr double kTangentTol = 1e-10;

/// Roots of eta(t) = lambda e. Tangent when |eta(t_circ) - lambda e| <= kTangentTol * lambda e.
/// Throws Error{Domain} for degenerate terms (e = 0 or t_circ undefined).
FiberRoots fiber_roots(const FiberTerms& ft, double lambda);

enum class NehariSet { NotOnNehari, Nplus, Nzero, Nminus };
std::string_view to_string(NehariSet s);

struct NehariClass {
  NehariSet set = NehariSet::NotOnNehari;
  double dpsi = 0.0;   // psi'(1)
  double ddpsi = 0.0;  // psi''(1)
  double tol = 0.0;
};

inline constexpr double kNehariTol = 1e-9;

/// Classification with relative tolerance tol * (a + b + c + d + lambda e).
NehariClass classify_nehari(const FiberTerms& ft, double lambda, double tol = kNehariTol);
/// Throws Error{InvalidArgument} for u = 0.
NehariClass classify_nehari(const Discretization& disc, const DiscreteFunction& u, double lambda,
                            double tol = kNehariTol);

}  // namespace dphase
