#pragma once

// Principal-branch Lambert W on (0, inf) and the scalar root problems that
// fix the admissible fugacity constants.

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "occucert/core.hpp"

namespace occucert {

struct SolverConfig {
  double abs_tol = 1e-13;
  int max_iterations = 200;
  std::pair<double, double> bracket{0.0, 0.5};
};

/// W(x) for x > 0: the w > 0 with w e^w = x.
inline double lambert_w(double x) {
  if (!(x > 0) || !std::isfinite(x)) throw PreconditionError("lambert_w needs a finite x > 0");
  double w;
  if (x < 1e-3) {
    w = x * (1.0 - x * (1.0 - 1.5 * x));  // x - x^2 + 3x^3/2
  } else if (x < std::exp(1.0)) {
    w = std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  } else {
    const double l1 = std::log(x), l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  // Halley on f(w) = w e^w - x.
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    const double step = f / denom;
    const double next = w - step;
    if (!(next > 0) || !std::isfinite(next)) break;
    w = next;
    if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * w) return w;
  }
  // Bisection fallback on (0, x); 0 < W(x) < x.
  double lo = 0.0, hi = std::min(x, std::max(1.0, std::log(x) + 1.0));
  for (int it = 0; it < 2000 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Root of a continuous function with a sign change on the bracket:
/// bisection interleaved with secant steps that stay inside the bracket.
inline double bracketed_root(const std::function<double(double)>& f, const SolverConfig& cfg) {
  double lo = cfg.bracket.first, hi = cfg.bracket.second;
  double flo = f(lo), fhi = f(hi);
  if (!(std::isfinite(flo) && std::isfinite(fhi)) || flo * fhi > 0)
    throw PreconditionError("bracketed_root: objective has no sign change on the bracket");
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double sec = hi - fhi * (hi - lo) / (fhi - flo);
    x = (sec > lo && sec < hi && (it % 2 == 1)) ? sec : 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0) return x;
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= cfg.abs_tol) break;
  }
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

/// Left and right sides of the constant equation: f(C) = e^{-4C}/(1+C)^8
/// and the geometric tail factor 2C/(1-2C).
inline double series_head_factor(double big_c) {
  return std::exp(-4.0 * big_c) / std::pow(1.0 + big_c, 8);
}
inline double series_tail_factor(double big_c) { return 2.0 * big_c / (1.0 - 2.0 * big_c); }

/// Objective for b = 0 (C = c): f(C) - 2C/(1-2C).
inline double c0_objective(double big_c) {
  return series_head_factor(big_c) - series_tail_factor(big_c);
}

/// Objective for b >= 1 with u = eta e^eta: f(u) - e^{3 eta} 2u/(1-2u).
inline double eta_objective(double eta) {
  const double u = eta * std::exp(eta);
  return series_head_factor(u) - std::exp(3.0 * eta) * series_tail_factor(u);
}

/// Unique root of c0_objective in (0, 1/2), about 0.1095972.
inline double solve_c0(SolverConfig cfg = {}) {
  cfg.bracket = {0.0, 0.5 - 1e-12};
  return bracketed_root(c0_objective, cfg);
}

/// Root of eta_objective with eta e^eta < 1/2, about 0.08968838.
inline double solve_eta(SolverConfig cfg = {}) {
  cfg.bracket = {0.0, lambert_w(0.5) * (1.0 - 1e-12)};
  return bracketed_root(eta_objective, cfg);
}

/// Downward-truncated constants, the operative ones for c(b).
inline Rational truncated_c0() { return Rational(109597, 1000000); }
inline Rational truncated_eta() { return Rational(896883, 10000000); }

/// c(b) exactly: c(0) = 0.109597, c(b) = 0.0896883 / b for b >= 1.
inline Rational c_of_b_exact(const Rational& b) {
  if (sgn(b) < 0 || (sgn(b) > 0 && b < 1))
    throw PreconditionError("c(b) is defined for b = 0 or b >= 1");
  if (sgn(b) == 0) return truncated_c0();
  return truncated_eta() / b;
}

inline double c_of_b(double b) {
  if (b < 0 || (b > 0 && b < 1)) throw PreconditionError("c(b) is defined for b = 0 or b >= 1");
  if (b == 0) return truncated_c0().get_d();
  return truncated_eta().get_d() / b;
}

}  // namespace occucert
