#include "dphase/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dphase/error.hpp"
#include "dphase/rng.hpp"
#include "dphase/space.hpp"

namespace dphase {

std::string_view to_string(NzeroStatus s) {
  switch (s) {
    case NzeroStatus::NoTangency: return "NoTangency";
    case NzeroStatus::TangencyFound: return "TangencyFound";
    case NzeroStatus::NoTwoRoot: return "NoTwoRoot";
  }
  return "?";
}

DiscreteFunction sample_direction(const Discretization& disc, std::uint64_t seed, std::uint64_t index) {
  DiscreteFunction u;
  if (index < kDeterministicDirections) {
    u = default_starts(disc.mesh(), seed)[index].u;
  } else {
    SeededStream rng(seed, index);
    std::vector<double> v(disc.node_count());
    for (auto& x : v) x = rng.uniform();
    u = DiscreteFunction(std::move(v));
  }
  const double n = norm_custom(disc, u);
  return n > 0.0 ? u.scaled(1.0 / n) : u;
}

DirectionSample inspect_direction(const Discretization& disc, const DiscreteFunction& u, std::uint64_t index) {
  DirectionSample s;
  s.index = index;
  s.terms = fiber_terms(disc, u);
  s.admitted = s.terms.a > 0.0 && s.terms.d > 0.0 && s.terms.e > 0.0;
  if (!s.admitted) return s;
  const TildeMax tm = t_tilde_circ(s.terms);
  s.t_tilde_circ = tm.t_tilde_circ;
  s.eta_tilde_max = tm.eta_tilde_max;
  s.lambda_tilde = tm.eta_tilde_max / s.terms.e;
  s.t_circ = t_circ(s.terms);
  s.eta_circ = eta(s.terms, s.t_circ);
  s.lambda_two_root = s.eta_circ / s.terms.e;
  return s;
}

LambdaTildeEstimate estimate_lambda_tilde(const Discretization& disc, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  LambdaTildeEstimate est;
  double running = HUGE_VAL;
  for (int k = 0; k < n_samples; ++k) {
    DirectionSample s = inspect_direction(disc, sample_direction(disc, seed, k), k);
    if (s.admitted) {
      ++est.admitted;
      running = std::min(running, s.lambda_tilde);
    } else {
      ++est.skipped;
    }
    est.running_min.push_back(running);
    est.samples.push_back(s);
  }
  est.value = est.admitted > 0 ? running : 0.0;
  return est;
}

namespace {

void tally(NzeroEvidence& ev, const Discretization& disc, const DiscreteFunction& u, std::uint64_t index) {
  const FiberTerms ft = fiber_terms(disc, u);
  if (!(ft.d > 0.0) || !(ft.e > 0.0) || ft.a + ft.b + ft.c <= 0.0) {
    ++ev.skipped;
    return;
  }
  const FiberRoots r = fiber_roots(ft, ev.lambda);
  switch (r.kind) {
    case RootCase::TwoRoots: ++ev.two_root; break;
    case RootCase::Tangent: ev.tangent.push_back(index); break;
    case RootCase::None: ++ev.no_root; break;
  }
}

void finish(NzeroEvidence& ev) {
  if (!ev.tangent.empty()) {
    ev.status = NzeroStatus::TangencyFound;
  } else if (ev.two_root == 0) {
    ev.status = NzeroStatus::NoTwoRoot;
  } else {
    ev.status = NzeroStatus::NoTangency;
  }
}

}  // namespace

NzeroEvidence check_nzero_empty(const Discretization& disc, double lambda, int n_samples, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  NzeroEvidence ev;
  ev.lambda = lambda;
  for (int k = 0; k < n_samples; ++k) tally(ev, disc, sample_direction(disc, seed, k), k);
  finish(ev);
  return ev;
}

NzeroEvidence check_nzero_empty(const Discretization& disc, double lambda,
                                const std::vector<DiscreteFunction>& directions) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  NzeroEvidence ev;
  ev.lambda = lambda;
  for (std::size_t k = 0; k < directions.size(); ++k) tally(ev, disc, directions[k], k);
  finish(ev);
  return ev;
}

namespace {

LambdaStarProbe probe_minus(const Discretization& disc, double lambda, const SolverOptions& opts) {
  LambdaStarProbe pr;
  pr.lambda = lambda;
  pr.min_energy = HUGE_VAL;
  int converged = 0, failed = 0;
  for (const auto& st : default_starts(disc.mesh(), opts.seed)) {
    try {
      const SolveResult r = minimize_on_branch(disc, lambda, Branch::Minus, st.u, opts);
      if (r.converged) {
        ++converged;
        pr.min_energy = std::min(pr.min_energy, r.energy);
      } else {
        ++failed;
      }
    } catch (const Error&) {
      ++failed;
    }
  }
  pr.determined = converged > 0;
  pr.positive = pr.determined && pr.min_energy > 0.0;
  if (!pr.determined) {
    pr.min_energy = 0.0;
    pr.note = "undetermined: no Minus run converged";
  } else if (failed > 0) {
    pr.note = std::to_string(failed) + " Minus runs did not converge";
  }
  return pr;
}

}  // namespace

LambdaStarEstimate estimate_lambda_star(const Discretization& disc, const std::vector<double>& grid,
                                        const SolverOptions& opts) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "lambda grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "lambda grid must ascend");
  }
  LambdaStarEstimate est;
  std::optional<double> lo, hi;
  for (double lambda : grid) {
    LambdaStarProbe pr = probe_minus(disc, lambda, opts);
    est.probes.push_back(pr);
    if (!pr.determined) {
      est.undetermined_at = lambda;
      break;
    }
    if (!pr.positive) {
      hi = lambda;
      break;
    }
    lo = lambda;
  }
  if (lo && hi) {
    for (int step = 0; step < 3; ++step) {
      const double mid = 0.5 * (*lo + *hi);
      LambdaStarProbe pr = probe_minus(disc, mid, opts);
      est.probes.push_back(pr);
      if (pr.positive) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  est.determined = lo.has_value();
  est.value = lo.value_or(0.0);
  return est;
}

namespace {

struct QuotientParts {
  double num = 0.0;  // ||u||_{1,p}^p
  double den = 0.0;  // sum m_i |u_i|^{p^*}
};

QuotientParts quotient_parts(const Discretization& disc, std::span<const double> u) {
  const Mesh& mesh = disc.mesh();
  const double p = disc.p(), ps = disc.p_star();
  QuotientParts qp;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Vec2 g = gradient_on_triangle(mesh, t, u);
    qp.num += mesh.triangles()[t].area * std::pow(std::hypot(g.x, g.y), p);
  }
  const auto m = mesh.node_weights();
  const auto alpha = disc.alpha_node();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::fabs(u[i]);
    qp.num += m[i] * alpha[i] * std::pow(a, p);
    qp.den += m[i] * std::pow(a, ps);
  }
  return qp;
}

double quotient_of(const Discretization& disc, std::span<const double> u) {
  const QuotientParts qp = quotient_parts(disc, u);
  if (!(qp.den > 0.0)) return HUGE_VAL;
  return qp.num / std::pow(qp.den, disc.p() / disc.p_star());
}

std::vector<double> quotient_gradient(const Discretization& disc, std::span<const double> u) {
  const Mesh& mesh = disc.mesh();
  const double p = disc.p(), ps = disc.p_star();
  const QuotientParts qp = quotient_parts(disc, u);
  std::vector<double> dnum(u.size(), 0.0), dden(u.size(), 0.0);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Triangle& tri = mesh.triangles()[t];
    const Vec2 g = gradient_on_triangle(mesh, t, u);
    const double r = std::hypot(g.x, g.y);
    if (r == 0.0) continue;
    const double w = tri.area * p * std::pow(r, p - 2.0);
    for (int k = 0; k < 3; ++k) dnum[tri.v[k]] += w * (g.x * tri.bx[k] + g.y * tri.by[k]);
  }
  const auto m = mesh.node_weights();
  const auto alpha = disc.alpha_node();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::fabs(u[i]);
    if (a == 0.0) continue;
    const double sgn = u[i] > 0.0 ? 1.0 : -1.0;
    dnum[i] += m[i] * alpha[i] * p * std::pow(a, p - 1.0) * sgn;
    dden[i] += m[i] * ps * std::pow(a, ps - 1.0) * sgn;
  }
  // d(N D^{-p/ps}) = D^{-p/ps} (dN - (p/ps) N dD / D)
  const double scale = std::pow(qp.den, -p / ps);
  std::vector<double> grad(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) grad[i] = scale * (dnum[i] - (p / ps) * qp.num * dden[i] / qp.den);
  return grad;
}

void normalize_max(std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  if (m > 0.0) for (auto& x : v) x /= m;
}

}  // namespace

double sobolev_quotient(const Discretization& disc, const DiscreteFunction& u) {
  disc.check(u);
  if (u.max() == 0.0 && u.min() == 0.0) throw Error(ErrorCode::InvalidArgument, "Sobolev quotient needs u != 0");
  return quotient_of(disc, u.values());
}

SobolevEstimate estimate_sobolev_constant(const Discretization& disc, int n_samples, std::uint64_t seed,
                                          int polish_iterations) {
  std::vector<std::vector<double>> candidates;
  for (const auto& st : default_starts(disc.mesh(), seed)) {
    candidates.emplace_back(st.u.values().begin(), st.u.values().end());
  }
  for (int k = 0; k < n_samples; ++k) {
    const DiscreteFunction u = sample_direction(disc, seed, k);
    candidates.emplace_back(u.values().begin(), u.values().end());
  }

  SobolevEstimate est;
  double running = HUGE_VAL;
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double r = quotient_of(disc, candidates[k]);
    ranked.emplace_back(r, k);
    running = std::min(running, r);
    est.running_min.push_back(running);
  }
  est.sample_min = running;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  // Projected gradient descent on the scale-invariant quotient from the best
  // few candidates. Constants are critical points, so one start is not enough.
  const std::size_t n_polish = std::min<std::size_t>(kPolishStarts, ranked.size());
  for (std::size_t s = 0; s < n_polish; ++s) {
    std::vector<double> cur = candidates[ranked[s].second];
    double value = ranked[s].first;
    normalize_max(cur);
    double step = 0.0;
    for (int it = 0; it < polish_iterations; ++it) {
      const std::vector<double> g = quotient_gradient(disc, cur);
      double gmax = 0.0;
      for (double x : g) gmax = std::max(gmax, std::fabs(x));
      if (gmax == 0.0) break;
      if (step == 0.0) step = 0.05 / gmax;
      bool accepted = false;
      for (int h = 0; h < 40; ++h, step *= 0.5) {
        std::vector<double> trial(cur.size());
        for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = std::max(cur[i] - step * g[i], 0.0);
        normalize_max(trial);
        const double r = quotient_of(disc, trial);
        if (r < value) {
          value = r;
          cur = std::move(trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      ++est.polish_steps;
      running = std::min(running, value);
      est.running_min.push_back(running);
      step *= 2.0;
    }
  }
  est.value = running;
  return est;
}

SweepReport run_sweep(const Discretization& disc, const SweepOptions& sweep, const SolverOptions& solver) {
  SweepReport rep;
  rep.samples = sweep.samples;
  rep.seed = sweep.seed;

  LambdaTildeEstimate lt = estimate_lambda_tilde(disc, sweep.samples, sweep.seed);
  rep.lambda_tilde_est = lt.value;
  rep.lambda_tilde_skipped = lt.skipped;
  rep.per_sample = std::move(lt.samples);

  std::vector<double> evidence_lambdas;
  if (rep.lambda_tilde_est > 0.0) {
    for (double f : {0.1, 0.5, 1.0}) evidence_lambdas.push_back(f * rep.lambda_tilde_est);
  }
  for (double l : sweep.lambda_grid) evidence_lambdas.push_back(l);
  for (double l : evidence_lambdas) rep.lambda_hat_evidence.push_back(check_nzero_empty(disc, l, sweep.samples, sweep.seed));

  SolverOptions sopts = solver;
  sopts.seed = sweep.seed;
  rep.lambda_star = estimate_lambda_star(disc, sweep.lambda_grid, sopts);
  rep.lambda_star_est = rep.lambda_star.value;

  rep.sobolev = estimate_sobolev_constant(disc, sweep.samples, sweep.seed);
  rep.sobolev_S_est = rep.sobolev.value;

  if (rep.lambda_star.determined && rep.lambda_tilde_est > 0.0 && rep.lambda_star_est > rep.lambda_tilde_est) {
    rep.ordering_ok = false;
    char buf[160];
    std::snprintf(buf, sizeof buf, "lambda_star_est %.17g exceeds lambda_tilde_est %.17g on this sample set",
                  rep.lambda_star_est, rep.lambda_tilde_est);
    rep.ordering_note = buf;
  }
  return rep;
}

}  // namespace dphase
