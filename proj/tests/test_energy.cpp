#include <doctest.h>

#include "dphase/energy.hpp"
#include "dphase/error.hpp"
#include "dphase/fibering.hpp"
#include "dphase/solver.hpp"
#include "dphase/space.hpp"
#include "oracles.hpp"

using namespace dphase;

namespace {

Discretization make(int n, ProblemData d = preset_problem()) {
  return Discretization(std::make_shared<const Mesh>(build_rect_mesh(n, n)), std::move(d));
}

std::vector<double> vec(const DiscreteFunction& u) { return {u.values().begin(), u.values().end()}; }

}  // namespace

TEST_CASE("energy of the constant one") {
  const auto disc = make(16);
  const auto one = DiscreteFunction::constant(disc.node_count(), 1.0);
  for (double lambda : {0.1, 1.0, 4.0}) {
    const EnergyValue e = energy(disc, one, lambda);
    CHECK(std::fabs(e.total - (-lambda / 4)) <= 1e-13);
    const double parts = e.kinetic_p + e.kinetic_q_mu + e.boundary + e.singular + e.superlinear;
    CHECK(std::fabs(e.total - parts) <= 1e-13 * std::max(1.0, std::fabs(e.total)));
  }
  CHECK(energy(disc, DiscreteFunction::constant(disc.node_count(), 0.0), 1.0).total == 0.0);
}

TEST_CASE("energy matches the re-summation oracle") {
  const auto disc = make(2);
  oracle::Random rng(1);
  for (int k = 0; k < 20; ++k) {
    const auto v = rng.vec(disc.node_count(), 0.05, 2.0);
    const double e = energy(disc, DiscreteFunction(v), 0.3).total;
    CHECK(e == doctest::Approx(oracle::energy(disc.mesh(), disc.data(), v, 0.3)).epsilon(1e-12));
  }
}

TEST_CASE("energy is even, decreasing in lambda") {
  const auto disc = make(5);
  oracle::Random rng(2);
  for (int k = 0; k < 20; ++k) {
    const DiscreteFunction u(rng.vec(disc.node_count(), -1, 1));
    CHECK(energy(disc, u.scaled(-1), 0.5).total == doctest::Approx(energy(disc, u, 0.5).total).epsilon(1e-14));
    CHECK(energy(disc, u, 0.2).total > energy(disc, u, 0.7).total);
  }
}

TEST_CASE("operator A") {
  const auto disc = make(16);
  const auto one = DiscreteFunction::constant(disc.node_count(), 1.0);
  CHECK(apply_operator_A(disc, one, one) == doctest::Approx(5.0).epsilon(1e-13));
  const double c = 0.7;
  CHECK(apply_operator_A(disc, one.scaled(c), one) ==
        doctest::Approx(std::pow(c, 0.5) + 4 * std::pow(c, 2.0)).epsilon(1e-13));
  oracle::Random rng(4);
  const DiscreteFunction h(rng.vec(disc.node_count(), -1, 1));
  CHECK(apply_operator_A(disc, one.scaled(0.0), h) == 0.0);
}

TEST_CASE("operator A is the derivative of the non-singular energy") {
  ProblemData d = preset_problem();
  d.zeta = CoefficientField("1");
  const auto disc = make(4, d);
  oracle::Random rng(8);
  for (int k = 0; k < 10; ++k) {
    const auto u = rng.vec(disc.node_count(), -1, 1);
    const auto h = rng.vec(disc.node_count(), -1, 1);
    // (1/p)a + (1/q)b + (1/p_*)c along u + s h
    const auto f = [&](double s) {
      std::vector<double> w(u.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] + s * h[i];
      const auto sums = oracle::resum(disc.mesh(), d, w);
      return (double)((sums.grad_p + sums.mass_p_alpha) / d.p + sums.grad_q_mu / d.q + sums.bdry / 3.0L);
    };
    const double step = 1e-6;
    const double fd = (f(step) - f(-step)) / (2 * step);
    CHECK(apply_operator_A(disc, DiscreteFunction(u), DiscreteFunction(h)) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("operator A is monotone") {
  const auto disc = make(6);
  oracle::Random rng(6);
  for (int k = 0; k < 100; ++k) {
    const auto u = rng.vec(disc.node_count(), -1, 1), v = rng.vec(disc.node_count(), -1, 1);
    std::vector<double> diff(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - v[i];
    const DiscreteFunction h(diff);
    CHECK(apply_operator_A(disc, DiscreteFunction(u), h) - apply_operator_A(disc, DiscreteFunction(v), h) > 0.0);
  }
}

TEST_CASE("energy gradient") {
  const auto disc = make(16);
  const auto one = DiscreteFunction::constant(disc.node_count(), 1.0);
  // Unfolded weak form at a smooth point.
  const EnergyGradient g = energy_gradient(disc, one, 4.0);
  const auto A = operator_action(disc, one);
  const auto m = disc.mesh().node_weights();
  for (std::size_t i = 0; i < disc.node_count(); ++i) {
    CHECK(std::fabs(g.values[i] - (A[i] - m[i] - 4.0 * m[i])) <= 1e-12);
  }
  CHECK_FALSE(g.floor_active());

  const auto small = make(3);
  oracle::Random rng(12);
  for (int k = 0; k < 5; ++k) {
    const auto u = rng.vec(small.node_count(), 0.1, 1.1);
    const auto gr = energy_gradient(small, DiscreteFunction(u), 0.4);
    const auto fd = oracle::fd_gradient(
        [&](const std::vector<double>& w) { return oracle::energy(small.mesh(), small.data(), w, 0.4); }, u, 1e-6);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(gr.values[i] == doctest::Approx(fd[i]).epsilon(1e-6));
  }

  std::vector<double> z(small.node_count(), 0.5);
  z[3] = 0.0;
  const auto gz = energy_gradient(small, DiscreteFunction(z), 0.4);
  CHECK(gz.floor_active());
  CHECK(gz.floored_nodes == std::vector<std::size_t>{3});
  for (double x : gz.values) CHECK(std::isfinite(x));
}

TEST_CASE("weak residual") {
  const auto disc = make(8);
  const auto one = DiscreteFunction::constant(disc.node_count(), 1.0);
  // Against h = 1 the defect is psi'(1) = 4 - lambda.
  CHECK(std::fabs(weak_defect(disc, one, 4.0, one)) <= 1e-12);
  CHECK(weak_defect(disc, one, 1.0, one) == doctest::Approx(3.0).epsilon(1e-12));
  const auto r = weak_residual(disc, one, 4.0);
  CHECK(r.residual_norm > 0.0);
  std::vector<double> z(disc.node_count(), 1.0);
  z[5] = 0.0;
  CHECK_THROWS_AS(weak_residual(disc, DiscreteFunction(z), 1.0), Error);
  const auto hn = hat_norms_1p(disc);
  for (double x : hn) CHECK(x > 0.0);
}

TEST_CASE("coercivity inequality on Nehari points") {
  const auto disc = make(6);
  oracle::Random rng(30);
  const double p = disc.p(), q = disc.q(), ps = disc.p_lower_star(), q1 = disc.q1(), k = disc.kappa();
  const double c1 = std::min({1 / p, 1 / q, 1 / ps}) - 1 / q1;
  int checked = 0;
  for (int s = 0; s < 60; ++s) {
    const DiscreteFunction u(rng.vec(disc.node_count(), 0.05, 1));
    const double lambda = 0.05;
    if (fiber_roots(fiber_terms(disc, u), lambda).kind != RootCase::TwoRoots) continue;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      const auto w = project_to_nehari(disc, u, lambda, b);
      const auto mb = modular_breakdown(disc, w);
      if (norm_custom(disc, w) <= 1.0) continue;
      ++checked;
      const double rhs = c1 * mb.rho() - (1 / (1 - k) - 1 / q1) * mb.zeta_sing;
      CHECK(energy(disc, w, lambda).total >= rhs - 1e-9 * std::fabs(rhs));
    }
  }
  CHECK(checked > 0);
}
