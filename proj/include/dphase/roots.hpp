#pragma once

// Scalar root finding on monotone maps: geometric bracket expansion followed
// by a bracketed hybrid of secant (Illinois) and bisection steps.

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace dphase::roots {

struct Bracket {
  double lo, hi;
  double f_lo, f_hi;
};

struct Root {
  double x;
  double fx;
  int iterations;
};

/// Walks geometrically from `x0` (multiplying or dividing by `factor`) until f
/// changes sign relative to f(x0). `toward_larger` selects the direction. Returns
/// nullopt after `max_steps` expansions or if x leaves the finite positive range.
template <class F>
std::optional<Bracket> expand_bracket(F&& f, double x0, double f0, bool toward_larger,
                                      double factor = 2.0, int max_steps = 200) {
  double x = x0;
  double fx = f0;
  for (int k = 0; k < max_steps; ++k) {
    const double next = toward_larger ? x * factor : x / factor;
    if (!(next > 0.0) || !std::isfinite(next)) return std::nullopt;
    const double fn = f(next);
    if (!std::isfinite(fn)) return std::nullopt;
    if ((fn > 0.0) != (f0 > 0.0) || fn == 0.0) {
      if (toward_larger) return Bracket{x, next, fx, fn};
      return Bracket{next, x, fn, fx};
    }
    x = next;
    fx = fn;
  }
  return std::nullopt;
}

/// Bracketed hybrid solve of f(x) = 0 on [lo, hi] with f(lo), f(hi) of opposite
/// sign. Stops when |f| <= f_tol or the bracket has collapsed to adjacent
/// doubles; in the latter case the endpoint with the smaller |f| is returned.
template <class F>
Root solve_bracketed(F&& f, Bracket br, double f_tol, int max_iter = 400) {
  double a = br.lo, b = br.hi, fa = br.f_lo, fb = br.f_hi;
  if (std::fabs(fa) <= f_tol) return {a, fa, 0};
  if (std::fabs(fb) <= f_tol) return {b, fb, 0};
  double true_fa = fa, true_fb = fb;  // fa/fb get scaled by the Illinois rule
  const auto best_end = [&](int it) {
    return std::fabs(true_fa) <= std::fabs(true_fb) ? Root{a, true_fa, it} : Root{b, true_fb, it};
  };
  int side = 0;  // Illinois bookkeeping: which end was retained last time
  double width = b - a;
  for (int it = 1; it <= max_iter; ++it) {
    double x = (a * fb - b * fa) / (fb - fa);
    const double mid = 0.5 * (a + b);
    // Fall back to bisection when the secant point is unusable or the bracket
    // stopped shrinking fast enough.
    if (!(x > a && x < b) || (b - a) > 0.5 * width) x = mid;
    width = b - a;
    if (!(x > a && x < b)) {
      // Bracket collapsed to adjacent doubles.
      return best_end(it);
    }
    const double fx = f(x);
    if (std::fabs(fx) <= f_tol || fx == 0.0) return {x, fx, it};
    if ((fx > 0.0) == (fb > 0.0)) {
      b = x;
      fb = true_fb = fx;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = x;
      fa = true_fa = fx;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  return best_end(max_iter);
}

}  // namespace dphase::roots
