#include "dphase/solver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <numeric>

#include "dphase/error.hpp"
#include "dphase/rng.hpp"
#include "dphase/space.hpp"

namespace dphase {

std::string_view to_string(Branch b) { return b == Branch::Plus ? "Plus" : "Minus"; }

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<double> clamp_nonnegative(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x = std::max(x, 0.0);
  return out;
}

NehariSet target_set(Branch b) { return b == Branch::Plus ? NehariSet::Nplus : NehariSet::Nminus; }

// Theta along the fiber-projected direction w, with the gradient of
// w -> Theta(t(w) w). Because psi_w'(t(w)) = 0 that gradient is t grad Theta(t w).
struct FiberPoint {
  std::vector<double> w;
  double t = 0.0;
  double value = 0.0;
  double noise = 0.0;  // roundoff scale of `value`
  std::vector<double> grad;
  double residual = 0.0;  // hat-function residual of t w, +inf if some node is floored
  bool floored = false;
};

class FiberObjective {
 public:
  FiberObjective(const Discretization& disc, double lambda, Branch branch, double floor)
      : disc_(disc), lambda_(lambda), branch_(branch), floor_(floor), hat_norms_(hat_norms_1p(disc)) {}

  // nullopt when the direction has no root on the requested branch.
  std::optional<FiberPoint> evaluate(std::vector<double> w) const {
    DiscreteFunction dir(std::move(w));
    const FiberTerms ft = fiber_terms(disc_, dir);
    if (!(ft.e > 0.0) || !(ft.d > 0.0)) return std::nullopt;
    const FiberRoots roots = fiber_roots(ft, lambda_);
    if (roots.kind != RootCase::TwoRoots) return std::nullopt;
    FiberPoint pt;
    pt.t = branch_ == Branch::Plus ? roots.t1 : roots.t2;
    const DiscreteFunction u = dir.scaled(pt.t);
    const EnergyValue e = energy(disc_, u, lambda_);
    pt.value = e.total;
    pt.noise = 64.0 * DBL_EPSILON *
               (std::fabs(e.kinetic_p) + std::fabs(e.kinetic_q_mu) + std::fabs(e.boundary) +
                std::fabs(e.singular) + std::fabs(e.superlinear));
    EnergyGradient g = energy_gradient(disc_, u, lambda_, floor_);
    pt.floored = g.floor_active();
    pt.residual = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      pt.residual = std::max(pt.residual, std::fabs(g.values[i]) / hat_norms_[i]);
    }
    if (pt.floored) pt.residual = HUGE_VAL;
    pt.grad = std::move(g.values);
    for (auto& x : pt.grad) x *= pt.t;
    pt.w = std::vector<double>(dir.values().begin(), dir.values().end());
    return pt;
  }

 private:
  const Discretization& disc_;
  double lambda_;
  Branch branch_;
  double floor_;
  std::vector<double> hat_norms_;
};

// Two-loop recursion; returns -H grad.
std::vector<double> lbfgs_direction(const std::deque<std::vector<double>>& S, const std::deque<std::vector<double>>& Y,
                                    const std::vector<double>& grad, const std::vector<double>& w) {
  std::vector<double> q = grad;
  const std::size_t m = S.size();
  std::vector<double> alpha(m), rho(m);
  for (std::size_t k = m; k-- > 0;) {
    rho[k] = 1.0 / dot(Y[k], S[k]);
    alpha[k] = rho[k] * dot(S[k], q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * Y[k][i];
  }
  double gamma;
  if (m > 0) {
    gamma = dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
  } else {
    // First step: move the largest entry by 5% of the direction's scale.
    const double gmax = max_abs(grad);
    gamma = gmax > 0.0 ? 0.05 * max_abs(w) / gmax : 1.0;
  }
  for (auto& x : q) x *= gamma;
  for (std::size_t k = 0; k < m; ++k) {
    const double beta = rho[k] * dot(Y[k], q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += S[k][i] * (alpha[k] - beta);
  }
  for (auto& x : q) x = -x;
  return q;
}

}  // namespace

DiscreteFunction project_to_nehari(const Discretization& disc, const DiscreteFunction& u, double lambda,
                                   Branch branch) {
  disc.check(u);
  if (u.min() < 0.0) throw Error(ErrorCode::InvalidArgument, "Nehari projection needs a nonnegative direction");
  if (u.max() == 0.0) throw Error(ErrorCode::InvalidArgument, "Nehari projection needs u != 0");
  const FiberTerms ft = fiber_terms(disc, u);
  const FiberRoots roots = fiber_roots(ft, lambda);
  if (roots.kind != RootCase::TwoRoots) {
    throw Error(ErrorCode::NoRoot, std::string("no ") + std::string(to_string(branch)) +
                                       " fiber root: max eta = " + std::to_string(roots.eta_circ) +
                                       " <= lambda e = " + std::to_string(lambda * ft.e));
  }
  return u.scaled(branch == Branch::Plus ? roots.t1 : roots.t2);
}

SolveResult minimize_on_branch(const Discretization& disc, double lambda, Branch branch,
                               const DiscreteFunction& init, const SolverOptions& opts) {
  disc.check(init);
  std::vector<double> w0 = clamp_nonnegative(init.values());
  if (max_abs(w0) == 0.0) throw Error(ErrorCode::InvalidArgument, "initial direction is identically zero");
  {
    const double n0 = norm_custom(disc, DiscreteFunction(w0));
    for (auto& x : w0) x /= n0;
  }

  const FiberObjective objective(disc, lambda, branch, opts.floor);
  auto first = objective.evaluate(w0);
  if (!first) {
    // Re-run the projection for its diagnostic message.
    project_to_nehari(disc, DiscreteFunction(w0), lambda, branch);
    throw Error(ErrorCode::NoRoot, "initial direction has no fiber root");
  }
  FiberPoint cur = std::move(*first);
  FiberPoint best = cur;
  const auto better = [](const FiberPoint& a, const FiberPoint& b) {
    const double tie = std::max(a.noise, b.noise);
    if (a.value < b.value - tie) return true;
    if (a.value > b.value + tie) return false;
    return a.residual < b.residual;
  };

  std::deque<std::vector<double>> S, Y;
  std::vector<double> history{cur.value};
  SolveResult res;
  res.branch = branch;
  int iter = 0;
  bool stopped = false;
  for (; iter < opts.max_iter && !stopped; ++iter) {
    if (cur.residual <= 1e-2 * opts.residual_tol) break;

    std::vector<double> d = lbfgs_direction(S, Y, cur.grad, cur.w);
    if (dot(d, cur.grad) >= 0.0) {
      S.clear();
      Y.clear();
      d = lbfgs_direction(S, Y, cur.grad, cur.w);
    }

    std::optional<FiberPoint> next;
    for (int attempt = 0; attempt < 2 && !next; ++attempt) {
      double step = 1.0;
      for (int h = 0; h <= opts.max_halvings; ++h, step *= opts.backtrack) {
        std::vector<double> trial(cur.w.size());
        for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = std::max(cur.w[i] + step * d[i], 0.0);
        if (max_abs(trial) == 0.0) continue;
        auto cand = objective.evaluate(std::move(trial));
        if (!cand) continue;
        std::vector<double> s(cur.w.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = cand->w[i] - cur.w[i];
        const double slope = dot(cur.grad, s);
        const bool armijo = cand->value <= cur.value + opts.armijo * slope;
        // Once the energy change drops below roundoff, accept steps that keep
        // the energy level and flatten the directional derivative.
        const double noise = std::max(cur.noise, cand->noise);
        const bool flat = cand->value <= cur.value + noise && std::fabs(dot(cand->grad, s)) <= 0.9 * std::fabs(slope);
        if (slope < 0.0 && (armijo || flat)) {
          next = std::move(cand);
          break;
        }
      }
      if (!next && !S.empty()) {
        // Retry once along the scaled steepest-descent direction.
        S.clear();
        Y.clear();
        d = lbfgs_direction(S, Y, cur.grad, cur.w);
      } else {
        break;
      }
    }
    if (!next) {
      res.message = "line search failed along steepest descent";
      stopped = true;
      break;
    }

    std::vector<double> s(cur.w.size()), y(cur.w.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = next->w[i] - cur.w[i];
      y[i] = next->grad[i] - cur.grad[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      if (static_cast<int>(S.size()) > opts.lbfgs_memory) {
        S.pop_front();
        Y.pop_front();
      }
    }

    // Theta(t(w) w) is invariant under w -> w / sigma; keep ||w|| = 1. The
    // gradient scales by sigma and the stored pairs follow.
    const double sigma = norm_custom(disc, DiscreteFunction(next->w));
    for (auto& x : next->w) x /= sigma;
    for (auto& x : next->grad) x *= sigma;
    next->t *= sigma;
    for (auto& v : S) for (auto& x : v) x /= sigma;
    for (auto& v : Y) for (auto& x : v) x *= sigma;

    cur = std::move(*next);
    if (cur.floored) ++res.floor_activations;
    if (better(cur, best)) best = cur;
    history.push_back(cur.value);

    const int k = static_cast<int>(history.size()) - 1;
    if (k >= opts.stall) {
      const double drop = history[k - opts.stall] - history[k];
      if (drop <= opts.energy_tol * std::max(std::fabs(history[k]), 1e-300) &&
          cur.residual <= 0.1 * opts.residual_tol) {
        break;
      }
    }
  }
  if (cur.residual <= opts.residual_tol && better(cur, best)) best = cur;

  // Re-project the best direction.
  const DiscreteFunction dir(best.w);
  res.start = "";
  res.u = project_to_nehari(disc, dir, lambda, branch);
  res.iterations = iter;
  res.energy = energy(disc, res.u, lambda).total;
  res.nehari = classify_nehari(disc, res.u, lambda, opts.nehari_tol);
  const bool positive = res.u.min() > opts.floor;
  if (positive) {
    res.residual = weak_residual(disc, res.u, lambda);
  } else {
    res.residual.residual_norm = HUGE_VAL;
  }
  res.converged = positive && res.residual.residual_norm <= opts.residual_tol && res.nehari.set == target_set(branch);
  if (!res.converged && res.message.empty()) {
    if (iter >= opts.max_iter) {
      res.message = "MaxIterations reached";
    } else if (!positive) {
      res.message = "singular floor active at the final iterate";
    } else if (res.nehari.set != target_set(branch)) {
      res.message = "final iterate not classified on the requested branch";
    } else {
      res.message = "residual above tolerance";
    }
  }
  return res;
}

std::vector<StartPoint> default_starts(const Mesh& mesh, std::uint64_t seed) {
  const auto nodes = mesh.nodes();
  const Rect& r = mesh.rect();
  const double cx = 0.5 * (r.x0 + r.x1), cy = 0.5 * (r.y0 + r.y1);
  std::vector<double> ones(nodes.size(), 1.0), ramp(nodes.size()), bump(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ramp[i] = 0.1 + (nodes[i].x - r.x0) / (r.x1 - r.x0);
    const double dx = nodes[i].x - cx, dy = nodes[i].y - cy;
    bump[i] = std::exp(-8.0 * (dx * dx + dy * dy));
  }
  std::vector<StartPoint> starts{{"ones", DiscreteFunction(ones)},
                                 {"ramp", DiscreteFunction(ramp)},
                                 {"bump", DiscreteFunction(bump)}};
  const std::size_t base = starts.size();
  for (std::size_t k = 0; k < base; ++k) {
    SeededStream rng(seed, k);
    std::vector<double> v(starts[k].u.values().begin(), starts[k].u.values().end());
    for (auto& x : v) x *= 1.0 + rng.uniform(-0.1, 0.1);
    starts.push_back({starts[k].name + "+perturbed", DiscreteFunction(std::move(v))});
  }
  return starts;
}

TwoSolutions solve_two(const Discretization& disc, double lambda, const SolverOptions& opts) {
  TwoSolutions out;
  out.lambda = lambda;
  const auto starts = default_starts(disc.mesh(), opts.seed);
  for (Branch branch : {Branch::Plus, Branch::Minus}) {
    auto& runs = branch == Branch::Plus ? out.plus_runs : out.minus_runs;
    for (const auto& st : starts) {
      try {
        SolveResult r = minimize_on_branch(disc, lambda, branch, st.u, opts);
        r.start = st.name;
        runs.push_back(std::move(r));
      } catch (const Error& e) {
        out.failures.push_back(std::string(to_string(branch)) + "/" + st.name + ": " + e.what());
      }
    }
    // Best converged run by (energy, start order); fall back to unconverged runs.
    const SolveResult* best = nullptr;
    for (const auto& r : runs) {
      if (best == nullptr || (r.converged && !best->converged) ||
          (r.converged == best->converged && r.energy < best->energy)) {
        best = &r;
      }
    }
    if (best != nullptr) (branch == Branch::Plus ? out.u_lambda : out.v_lambda) = *best;
  }
  out.sign_pattern_ok = out.u_lambda && out.v_lambda && out.u_lambda->converged && out.v_lambda->converged &&
                        out.u_lambda->energy < 0.0 && out.v_lambda->energy > 0.0 && out.u_lambda->u.min() > 0.0 &&
                        out.v_lambda->u.min() > 0.0;
  return out;
}

double embedding_constant_estimate(const Discretization& disc, const std::vector<DiscreteFunction>& samples) {
  double best = 0.0;
  for (const auto& u : samples) {
    const auto mb = modular_breakdown(disc, u);
    const double lower = std::pow(mb.grad_p + mb.mass_p_alpha, 1.0 / disc.p());
    if (lower > 0.0) best = std::max(best, std::pow(mb.mass_q1, 1.0 / disc.q1()) / lower);
  }
  return best;
}

double minus_branch_norm_floor(const Discretization& disc, double lambda, double embedding_constant) {
  const double pk = disc.p() + disc.kappa() - 1.0;
  const double qk = disc.q1() + disc.kappa() - 1.0;
  return std::pow(pk / (lambda * std::pow(embedding_constant, disc.p()) * qk), 1.0 / (disc.q1() - disc.p()));
}

}  // namespace dphase
