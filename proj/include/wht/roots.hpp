#pragma once

// Scalar root finding and maximization used by the weight solvers.
//
// All root problems in this library are monotone: the function is strictly
// decreasing, so any sign change brackets the unique root.

#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include "wht/errors.hpp"

namespace wht::numeric {

/// f(lo) >= 0 >= f(hi) for a decreasing f.
struct Bracket {
  double lo;
  double hi;
};

struct RootOptions {
  /// Stop once |f(x)| <= residual_tol. 0 runs to machine precision.
  double residual_tol = 0.0;
  int max_iter = 400;
};

/// Expands outward from `start` with a doubling step until a decreasing f
/// changes sign. Throws InfeasibleError if no sign change is found before
/// the step overflows.
template <class F>
Bracket bracket_decreasing(F&& f, double start = 0.0, double step = 1.0) {
  double x = start;
  double fx = f(x);
  if (std::isnan(fx)) throw InfeasibleError("root bracketing: function is NaN at start");
  if (fx == 0.0) return {x, x};
  const double dir = fx > 0.0 ? 1.0 : -1.0;  // root lies to the right if f > 0
  while (std::isfinite(step)) {
    const double next = start + dir * step;
    const double fn = f(next);
    if (std::isnan(fn)) throw InfeasibleError("root bracketing: function is NaN");
    if ((fn > 0.0) != (fx > 0.0) || fn == 0.0) {
      return dir > 0.0 ? Bracket{x, next} : Bracket{next, x};
    }
    x = next;
    fx = fn;
    step *= 2.0;
  }
  throw InfeasibleError("root bracketing: no sign change found");
}

/// Bisection for a decreasing f on a valid bracket. Returns the iterate with
/// the smallest |f| once the tolerance is met or the bracket collapses.
template <class F>
double bisect_decreasing(F&& f, Bracket br, const RootOptions& opt = {}) {
  double lo = br.lo;
  double hi = br.hi;
  double best = lo;
  double best_abs = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    const double fm = f(mid);
    if (std::abs(fm) < best_abs) {
      best = mid;
      best_abs = std::abs(fm);
    }
    if (best_abs <= opt.residual_tol || mid <= lo || mid >= hi) break;
    (fm > 0.0 ? lo : hi) = mid;
  }
  return best;
}

/// Newton iteration safeguarded by bisection for a decreasing f. `fd(x)`
/// returns {f(x), f'(x)}. Falls back to a bisection step whenever the Newton
/// step leaves the bracket or fails to halve it, so the bracket guarantee of
/// plain bisection is kept.
template <class FD>
double newton_decreasing(FD&& fd, Bracket br, const RootOptions& opt = {}) {
  double lo = br.lo;
  double hi = br.hi;
  if (lo == hi) return lo;
  double x = lo + 0.5 * (hi - lo);
  double dx_old = hi - lo;
  double dx = dx_old;
  double fx = 0.0;
  double dfx = 0.0;
  std::tie(fx, dfx) = fd(x);
  double best = x;
  double best_abs = std::abs(fx);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (best_abs <= opt.residual_tol) break;
    (fx > 0.0 ? lo : hi) = x;
    const double newton = dfx < 0.0 ? x - fx / dfx : std::numeric_limits<double>::quiet_NaN();
    const bool take_newton = std::isfinite(newton) && newton > lo && newton < hi &&
                             std::abs(2.0 * fx) <= std::abs(dx_old * dfx);
    dx_old = dx;
    if (take_newton) {
      dx = x - newton;
      x = newton;
    } else {
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    }
    if (x <= lo || x >= hi) break;  // bracket exhausted at machine precision
    std::tie(fx, dfx) = fd(x);
    if (std::abs(fx) < best_abs) {
      best = x;
      best_abs = std::abs(fx);
    }
  }
  return best;
}

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
template <class F>
double golden_section_max(F&& f, double lo, double hi, double x_tol, int max_iter = 300) {
  constexpr double inv_phi = 0.61803398874989484820;  // 1/φ
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace wht::numeric
