#include <doctest.h>

#include "dphase/error.hpp"
#include "dphase/fibering.hpp"
#include "oracles.hpp"

using namespace dphase;

namespace {

const FiberExponents kPreset{1.5, 1.8, 3.0, 4.0, 0.5};

FiberTerms terms(double a, double b, double c, double d, double e) { return FiberTerms{a, b, c, d, e, kPreset}; }

Discretization make(int n) {
  return Discretization(std::make_shared<const Mesh>(build_rect_mesh(n, n)), preset_problem());
}

FiberTerms random_terms(oracle::Random& rng) {
  return terms(rng.uniform(0.1, 5), rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0.1, 5), rng.uniform(0.1, 5));
}

constexpr double kTCirc = 0.7130524060235187;  // 2.5 t + 4 t^2.5 = 3.5
constexpr double kEtaCirc = 4.672388241596084;
constexpr double kT1 = 0.5743491774985175;     // lambda = 4

}  // namespace

TEST_CASE("fiber terms of the constant one") {
  const auto disc = make(16);
  const auto ft = fiber_terms(disc, DiscreteFunction::constant(disc.node_count(), 1.0));
  CHECK(ft.a == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ft.b == 0.0);
  CHECK(ft.c == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(ft.d == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ft.e == doctest::Approx(1.0).epsilon(1e-14));
  const auto z = fiber_terms(disc, DiscreteFunction::constant(disc.node_count(), 0.0));
  CHECK(z.a + z.b + z.c + z.d + z.e == 0.0);
}

TEST_CASE("fiber terms match the re-summation oracle") {
  const auto disc = make(4);
  oracle::Random rng(2);
  const auto v = rng.vec(disc.node_count(), 0, 1);
  const auto ft = fiber_terms(disc, DiscreteFunction(v));
  const auto s = oracle::resum(disc.mesh(), disc.data(), v);
  CHECK(ft.a == doctest::Approx((double)(s.grad_p + s.mass_p_alpha)).epsilon(1e-12));
  CHECK(ft.b == doctest::Approx((double)s.grad_q_mu).epsilon(1e-12));
  CHECK(ft.c == doctest::Approx((double)s.bdry).epsilon(1e-12));
  CHECK(ft.d == doctest::Approx((double)s.zeta).epsilon(1e-12));
  CHECK(ft.e == doctest::Approx((double)s.mass_q1).epsilon(1e-12));
}

TEST_CASE("psi derivatives") {
  const auto ft = terms(1, 0, 4, 1, 1);
  const auto pv = psi_derivatives(ft, 4.0, 1.0);
  CHECK(std::fabs(pv.dpsi) <= 1e-15);
  CHECK(pv.ddpsi == doctest::Approx(-3.0).epsilon(1e-15));
  oracle::Random rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto r = random_terms(rng);
    const double lambda = rng.uniform(0.01, 3);
    CHECK(psi_derivatives(r, lambda, 1.0).dpsi == doctest::Approx(r.a + r.b + r.c - r.d - lambda * r.e));
    const double h = 1e-7, t = 0.7;
    const double fd = (psi_value(r, lambda, t + h) - psi_value(r, lambda, t - h)) / (2 * h);
    CHECK(psi_derivatives(r, lambda, t).dpsi == doctest::Approx(fd).epsilon(1e-7));
    const double fd2 = (psi_derivatives(r, lambda, t + h).dpsi - psi_derivatives(r, lambda, t - h).dpsi) / (2 * h);
    CHECK(psi_derivatives(r, lambda, t).ddpsi == doctest::Approx(fd2).epsilon(1e-6));
  }
  CHECK_THROWS_AS(psi_derivatives(ft, 1.0, 0.0), Error);
  CHECK(psi_value(ft, 1.0, 0.0) == 0.0);
}

TEST_CASE("eta, eta_tilde, xi") {
  const auto ft = terms(1, 0, 4, 1, 1);
  CHECK(eta(ft, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  oracle::Random rng(4);
  for (int k = 0; k < 200; ++k) {
    const auto r = random_terms(rng);
    const double lambda = rng.uniform(0.01, 3), t = std::exp(rng.uniform(-4, 4));
    const double lhs = psi_derivatives(r, lambda, t).dpsi;
    const double rhs = std::pow(t, r.ex.q1 - 1) * (eta(r, t) - lambda * r.e);
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max({std::fabs(lhs), std::fabs(rhs), 1e-300}) +
                                      1e-13 * std::pow(t, r.ex.q1 - 1) * lambda * r.e);
    CHECK(eta_tilde(r, t) <= eta(r, t));
    const double dt = t * rng.uniform(1e-3, 1);
    CHECK(xi(r, t + dt) > xi(r, t));
  }
  CHECK_THROWS_AS(eta(ft, -1.0), Error);
  // Limits at 0+ and infinity.
  for (int k = 1; k <= 6; ++k) {
    CHECK(eta(ft, std::pow(10.0, -k)) < -std::pow(10.0, k));
    const double far = eta(ft, std::pow(10.0, k));
    CHECK(far > 0.0);
    CHECK(far < 5 * std::pow(10.0, -k));
  }
}

TEST_CASE("t_tilde_circ") {
  const auto ft = terms(1, 0, 0, 1, 1);
  const auto tm = t_tilde_circ(ft);
  CHECK(std::fabs(tm.t_tilde_circ - 1.4) <= 1e-12);
  CHECK(tm.eta_tilde_max == doctest::Approx(0.4 * std::pow(5.0 / 7.0, 3.5)).epsilon(1e-13));
  CHECK(tm.eta_tilde_max == doctest::Approx(0.12320032867762633).epsilon(1e-13));
  CHECK(tm.eta_tilde_max_closed_form == doctest::Approx(tm.eta_tilde_max).epsilon(1e-12));
  const double arg = oracle::grid_argmax([&](double t) { return eta_tilde(ft, t); }, 0.1, 10.0);
  CHECK(std::fabs(eta_tilde(ft, arg) - tm.eta_tilde_max) <= 1e-8);
  CHECK_THROWS_AS(t_tilde_circ(terms(0, 1, 1, 1, 1)), Error);
  CHECK_THROWS_AS(t_tilde_circ(terms(1, 1, 1, 0, 1)), Error);
}

TEST_CASE("t_circ") {
  const auto ft = terms(1, 0, 4, 1, 1);
  const double oracle_t = oracle::bisect([](double t) { return 2.5 * t + 4 * std::pow(t, 2.5) - 3.5; }, 0.7, 0.75);
  CHECK(std::fabs(oracle_t - kTCirc) <= 1e-14);
  const double t = t_circ(ft);
  CHECK(std::fabs(t - kTCirc) <= 1e-11);
  CHECK(eta(ft, t) == doctest::Approx(kEtaCirc).epsilon(1e-12));
  CHECK(t_circ(terms(1, 0, 0, 1, 1)) == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(eta(ft, t) >= eta(ft, t + 1e-3));
  CHECK(eta(ft, t) >= eta(ft, t - 1e-3));
  CHECK_THROWS_AS(t_circ(terms(0, 0, 0, 1, 1)), Error);
  CHECK_THROWS_AS(t_circ(terms(1, 0, 0, 0, 1)), Error);
  oracle::Random rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto r = random_terms(rng);
    const double tc = t_circ(r);
    const double arg = oracle::grid_argmax([&](double s) { return eta(r, s); }, tc / 10, tc * 10, 4000);
    CHECK(arg == doctest::Approx(tc).epsilon(1e-5));
  }
}

TEST_CASE("fiber roots") {
  const auto ft = terms(1, 0, 4, 1, 1);
  const auto r = fiber_roots(ft, 4.0);
  REQUIRE(r.kind == RootCase::TwoRoots);
  CHECK(std::fabs(r.t2 - 1.0) <= 1e-10);
  const auto g = [](double t) { return t + 4 * std::pow(t, 2.5) - 1 - 4 * std::pow(t, 3.5); };
  CHECK(g(0.55) < 0);
  CHECK(g(0.60) > 0);
  CHECK(std::fabs(r.t1 - oracle::bisect(g, 0.55, 0.60)) <= 1e-10);
  CHECK(std::fabs(r.t1 - kT1) <= 1e-10);
  CHECK(psi_derivatives(ft, 4.0, r.t1).ddpsi > 0);
  CHECK(fiber_roots(ft, 4.7).kind == RootCase::None);
  CHECK(fiber_roots(ft, kEtaCirc).kind == RootCase::Tangent);

  oracle::Random rng(6);
  for (int k = 0; k < 100; ++k) {
    const auto base = random_terms(rng);
    const double threshold = eta(base, t_circ(base)) / base.e;
    const double lambda = threshold * rng.uniform(0.05, 0.95);
    const auto rr = fiber_roots(base, lambda);
    REQUIRE(rr.kind == RootCase::TwoRoots);
    CHECK(rr.t1 < rr.t_circ);
    CHECK(rr.t_circ < rr.t2);
    CHECK(std::fabs(eta(base, rr.t1) - lambda * base.e) <= 1e-12 * lambda * base.e);
    CHECK(std::fabs(eta(base, rr.t2) - lambda * base.e) <= 1e-12 * lambda * base.e);
    const double d1 = psi_derivatives(base, lambda, rr.t1).ddpsi;
    const double d2 = psi_derivatives(base, lambda, rr.t2).ddpsi;
    CHECK(d1 > 0);
    CHECK(d2 < 0);
    CHECK(d1 == doctest::Approx(std::pow(rr.t1, 3.0) * eta_derivative(base, rr.t1)).epsilon(1e-8));
    // Shape of the fiber: global min on (0, t_circ) at t1, max on [t1, inf) at t2.
    const double psi1 = psi_value(base, lambda, rr.t1), psi2 = psi_value(base, lambda, rr.t2);
    for (int j = 1; j < 400; ++j) {
      const double t = rr.t_circ * j / 400.0;
      CHECK(psi_value(base, lambda, t) >= psi1 - 1e-12 * std::fabs(psi1));
      const double s = rr.t1 + (rr.t2 * 4 - rr.t1) * j / 400.0;
      CHECK(psi_value(base, lambda, s) <= psi2 + 1e-12 * std::fabs(psi2));
    }
    // Scaling law: roots of s u are roots of u divided by s.
    const double s = rng.uniform(0.2, 5);
    const auto& ex = base.ex;
    const FiberTerms scaled{base.a * std::pow(s, ex.p), base.b * std::pow(s, ex.q),
                            base.c * std::pow(s, ex.p_lower_star), base.d * std::pow(s, 1 - ex.kappa),
                            base.e * std::pow(s, ex.q1), ex};
    const auto rs = fiber_roots(scaled, lambda);
    CHECK(rs.t1 == doctest::Approx(rr.t1 / s).epsilon(1e-9));
    CHECK(rs.t2 == doctest::Approx(rr.t2 / s).epsilon(1e-9));
  }
}

TEST_CASE("Nehari classification") {
  const auto disc = make(8);
  const auto one = DiscreteFunction::constant(disc.node_count(), 1.0);
  CHECK(classify_nehari(disc, one, 4.0).set == NehariSet::Nminus);
  const auto c1 = classify_nehari(disc, one, 1.0);
  CHECK(c1.set == NehariSet::NotOnNehari);
  CHECK(c1.dpsi == doctest::Approx(3.0));
  CHECK_THROWS_AS(classify_nehari(disc, DiscreteFunction::constant(disc.node_count(), 0.0), 1.0), Error);
  // A tangent fiber: psi'(t_circ) = psi''(t_circ) = 0.
  const auto ft = terms(1, 0, 4, 1, 1);
  const double tc = t_circ(ft);
  const auto& ex = ft.ex;
  const FiberTerms at_tc{ft.a * std::pow(tc, ex.p), 0, ft.c * std::pow(tc, ex.p_lower_star),
                         ft.d * std::pow(tc, 1 - ex.kappa), ft.e * std::pow(tc, ex.q1), ex};
  CHECK(classify_nehari(at_tc, eta(ft, tc) / ft.e).set == NehariSet::Nzero);
  CHECK(to_string(NehariSet::Nplus) == "Nplus");
}
