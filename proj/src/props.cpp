#include "dphase/props.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "dphase/energy.hpp"
#include "dphase/error.hpp"
#include "dphase/fibering.hpp"
#include "dphase/rng.hpp"
#include "dphase/solver.hpp"
#include "dphase/space.hpp"

namespace dphase {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { out_.suite = std::move(name); }

  void check(bool ok, const char* what, int sample) {
    ++out_.checks;
    if (!ok) {
      if (out_.failures == 0) out_.first_failure = std::string(what) + " (sample " + std::to_string(sample) + ")";
      ++out_.failures;
    }
  }

  // Exceptions inside a sample count as one failed check.
  void run(int samples, const std::function<void(int)>& body) {
    for (int k = 0; k < samples; ++k) {
      try {
        body(k);
      } catch (const std::exception& e) {
        check(false, e.what(), k);
      }
    }
  }

  PropertyOutcome result() const { return out_; }

 private:
  PropertyOutcome out_;
};

DiscreteFunction random_function(SeededStream& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return DiscreteFunction(std::move(v));
}

// Log-uniform scale so both norm regimes appear.
DiscreteFunction random_scaled(SeededStream& rng, std::size_t n, bool signed_values) {
  const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
  return random_function(rng, n, signed_values ? -1.0 : 0.0, 1.0).scaled(scale);
}

PropertyOutcome modular_norm_suite(const Discretization& disc, std::uint64_t seed, int samples) {
  Suite s("modular_norm");
  const double r_min = std::min(disc.p(), disc.p_lower_star());
  const double r_max = std::max(disc.q(), disc.p_lower_star());
  const double slack = 1e-12;
  s.run(samples, [&](int k) {
    SeededStream rng(seed, 100 + k);
    const DiscreteFunction u = random_scaled(rng, disc.node_count(), true);
    const double n = norm_custom(disc, u);
    const double rho = modular_breakdown(disc, u).rho();
    s.check(std::fabs(modular_breakdown(disc, u.scaled(1.0 / n)).rho() - 1.0) <= 1e-10, "rho(u/||u||) = 1", k);
    s.check((n < 1.0) == (rho < 1.0) && (n > 1.0) == (rho > 1.0), "||u|| and rho(u) on the same side of 1", k);
    if (n < 1.0) {
      s.check(std::pow(n, r_max) <= rho * (1 + slack) && rho <= std::pow(n, r_min) * (1 + slack),
              "||u||^r_max <= rho <= ||u||^r_min", k);
    } else {
      s.check(std::pow(n, r_min) <= rho * (1 + slack) && rho <= std::pow(n, r_max) * (1 + slack),
              "||u||^r_min <= rho <= ||u||^r_max", k);
    }
    const double n_small = norm_custom(disc, u.scaled(1e-3)), n_big = norm_custom(disc, u.scaled(1e3));
    s.check(std::fabs(n_small - 1e-3 * n) <= 1e-10 * n && std::fabs(n_big - 1e3 * n) <= 1e-10 * 1e3 * n,
            "norm is absolutely homogeneous", k);
  });
  return s.result();
}

PropertyOutcome sandwich_suite(const Discretization& disc, std::uint64_t seed, int samples) {
  Suite s("norm_sandwich");
  s.run(samples, [&](int k) {
    SeededStream rng(seed, 200 + k);
    const DiscreteFunction u = random_scaled(rng, disc.node_count(), true);
    const double custom = norm_custom(disc, u), star = norm_star(disc, u), circ = norm_circ(disc, u);
    s.check(std::fabs(custom - star) <= 1e-12 * std::max(custom, star), "norm_custom = norm_star", k);
    s.check(circ / 3.0 <= star * (1 + 1e-12) && star <= 3.0 * circ * (1 + 1e-12), "circ/3 <= star <= 3 circ", k);
  });
  return s.result();
}

PropertyOutcome monotonicity_suite(const Discretization& disc, std::uint64_t seed, int samples) {
  Suite s("monotonicity");
  s.run(samples, [&](int k) {
    SeededStream rng(seed, 300 + k);
    const DiscreteFunction u = random_function(rng, disc.node_count(), -1.0, 1.0);
    const DiscreteFunction v = random_function(rng, disc.node_count(), -1.0, 1.0);
    std::vector<double> diff(u.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u[i] - v[i];
    const DiscreteFunction h(diff);
    const double pairing = apply_operator_A(disc, u, h) - apply_operator_A(disc, v, h);
    s.check(pairing > 0.0, "<A(u) - A(v), u - v> > 0", k);
  });
  return s.result();
}

PropertyOutcome gradient_suite(const Discretization& disc, double lambda, std::uint64_t seed, int samples) {
  Suite s("gradient");
  s.run(samples, [&](int k) {
    SeededStream rng(seed, 400 + k);
    const DiscreteFunction u = random_function(rng, disc.node_count(), 0.1, 1.1);
    const EnergyGradient g = energy_gradient(disc, u, lambda);
    std::vector<double> w(u.values().begin(), u.values().end());
    double worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double h = 1e-5 * std::max(1.0, std::fabs(w[i]));
      const double keep = w[i];
      w[i] = keep + h;
      const double fp = energy(disc, DiscreteFunction(w), lambda).total;
      w[i] = keep - h;
      const double fm = energy(disc, DiscreteFunction(w), lambda).total;
      w[i] = keep;
      const double fd = (fp - fm) / (2 * h);
      worst = std::max(worst, std::fabs(fd - g.values[i]) / std::max(std::fabs(fd), 1e-6));
    }
    s.check(worst <= 1e-5, "energy_gradient matches central differences", k);
  });
  return s.result();
}

PropertyOutcome fiber_suite(const Discretization& disc, std::uint64_t seed, int samples) {
  Suite s("fiber");
  s.run(samples, [&](int k) {
    SeededStream rng(seed, 500 + k);
    const DiscreteFunction u = random_function(rng, disc.node_count(), 0.05, 1.0);
    const FiberTerms ft = fiber_terms(disc, u);
    const double t_c = t_circ(ft);
    const double threshold = eta(ft, t_c) / ft.e;
    const double lambda = rng.uniform(0.1, 0.9) * threshold;
    const double t = std::exp(rng.uniform(-3.0, 3.0));
    const PsiValues pv = psi_derivatives(ft, lambda, t);
    const double ident = std::pow(t, ft.ex.q1 - 1.0) * (eta(ft, t) - lambda * ft.e);
    s.check(std::fabs(pv.dpsi - ident) <= 1e-10 * (std::fabs(pv.dpsi) + std::fabs(ident) + 1e-300) + 1e-300,
            "psi'(t) = t^(q1-1) (eta(t) - lambda e)", k);
    const FiberRoots r = fiber_roots(ft, lambda);
    s.check(r.kind == RootCase::TwoRoots, "two fiber roots below the threshold", k);
    if (r.kind != RootCase::TwoRoots) return;
    s.check(r.t1 < r.t_circ && r.t_circ < r.t2, "t1 < t_circ < t2", k);
    s.check(psi_derivatives(ft, lambda, r.t1).ddpsi > 0.0 && psi_derivatives(ft, lambda, r.t2).ddpsi < 0.0,
            "psi''(t1) > 0 > psi''(t2)", k);
    s.check(xi(ft, t * 1.01) > xi(ft, t), "xi increasing", k);
  });
  return s.result();
}

PropertyOutcome projection_suite(const Discretization& disc, double lambda, std::uint64_t seed, int samples) {
  Suite s("projection");
  s.run(samples, [&](int k) {
    SeededStream rng(seed, 600 + k);
    const DiscreteFunction u = random_function(rng, disc.node_count(), 0.05, 1.0);
    const FiberTerms ft = fiber_terms(disc, u);
    if (fiber_roots(ft, lambda).kind != RootCase::TwoRoots) return;
    const auto plus = classify_nehari(disc, project_to_nehari(disc, u, lambda, Branch::Plus), lambda);
    const auto minus = classify_nehari(disc, project_to_nehari(disc, u, lambda, Branch::Minus), lambda);
    s.check(plus.set == NehariSet::Nplus, "Plus projection lies in N+", k);
    s.check(minus.set == NehariSet::Nminus, "Minus projection lies in N-", k);
  });
  return s.result();
}

}  // namespace

std::vector<PropertyOutcome> run_property_suites(const Discretization& disc, double lambda, std::uint64_t seed,
                                                 int samples) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
  return {modular_norm_suite(disc, seed, samples),         sandwich_suite(disc, seed, samples),
          monotonicity_suite(disc, seed, samples),         gradient_suite(disc, lambda, seed, samples / 20 + 1),
          fiber_suite(disc, seed, samples),                projection_suite(disc, lambda, seed, samples)};
}

}  // namespace dphase
