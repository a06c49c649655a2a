#pragma once

// Internal helpers for integrals of the form
//
//     int g(s) / sqrt(w(s) - w_min + da) ds,        da = alpha - alpha0 >= 0,
//
// which drive the feasibility bound, the boundary-condition map and the
// closed-form distortion.  Two numerical hazards are handled here:
//
//  * cancellation: w(s) - w_min loses all precision near the minimizer s*,
//    so the analytic families get exact difference formulas (a product form
//    for the constant metric, expm1/log1p for power laws);
//  * the inverse-square-root endpoint singularity at da = 0: substituting
//    s = endpoint +/- v^2 turns it into a smooth integrand, which the
//    adaptive rule then resolves to near machine precision instead of
//    creeping along a bisection cascade.

#include <cmath>

#include "rhomap/metric.hpp"
#include "rhomap/quadrature.hpp"

namespace rhomap::detail {

struct WeightContext {
  const Metric* metric;
  Weights weights;
  double s_star;
  double w_min;

  double alpha0() const { return -w_min; }

  /// w(s) - w_min via the cancellation-safe path where available.
  double d(double s) const { return d_offset(s - s_star, s); }

  /// Same, parametrized by delta = s - s_star (supplied exactly by the
  /// transformed panels, where delta is built from v^2 without rounding).
  double d_offset(double delta, double s) const {
    const double b2 = weights.b * weights.b;
    switch (metric->kind()) {
      case Metric::Kind::Constant:
        // w = b^2 s^2:  d = b^2 (s - s*)(s + s*)
        return b2 * delta * (s + s_star);
      case Metric::Kind::Power: {
        // w = b^2 s^(2-2l):  d = w_min * expm1((2-2l) log(s/s*))
        const double e = 2.0 - 2.0 * metric->power_exponent();
        if (e == 0.0) return 0.0;
        return w_min * std::expm1(e * std::log1p(delta / s_star));
      }
      case Metric::Kind::Tabulated:
        return weight(*metric, weights, s) - w_min;
    }
    return weight(*metric, weights, s) - w_min;
  }
};

inline WeightContext make_weight_context(const Metric& m, const Weights& wt,
                                         double R) {
  const WeightMinimum wm = minimize_weight(m, wt, R);
  return {&m, wt, wm.s_star, wm.w_min};
}

/// Accumulates QuadResults of sub-integrals.
inline void fold(QuadResult& acc, const QuadResult& part) {
  acc.value += part.value;
  acc.abs_error_estimate += part.abs_error_estimate;
  acc.subdivisions += part.subdivisions;
  acc.converged = acc.converged && part.converged;
}

/// int_lo^hi g(s) / sqrt(d(s) + da) ds for lo < hi and da >= 0.  The
/// substitution is applied whenever s_star lies on (or within rounding of)
/// an endpoint; an interior s_star splits the interval in two first.
template <class G>
QuadResult sqrt_weighted_integral(const WeightContext& ctx, G&& g, double lo,
                                  double hi, double da, double rel_tol) {
  constexpr double kFloor = 1e-300;
  if (!(hi > lo)) return {};

  const double near = 1e-9 * (1.0 + std::abs(ctx.s_star));
  const bool at_lo = std::abs(ctx.s_star - lo) <= near;
  const bool at_hi = std::abs(ctx.s_star - hi) <= near;

  if (!at_lo && !at_hi && ctx.s_star > lo && ctx.s_star < hi) {
    QuadResult acc = sqrt_weighted_integral(ctx, g, lo, ctx.s_star, da, rel_tol);
    fold(acc, sqrt_weighted_integral(ctx, g, ctx.s_star, hi, da, rel_tol));
    return acc;
  }
  if (at_lo) {
    // s = lo + v^2: delta = (lo - s*) + v^2 is exact, and ds = 2v dv
    // cancels the inverse square root.
    const double delta0 = lo - ctx.s_star;
    auto gv = [&](double v) {
      const double delta = delta0 + v * v;
      const double s = lo + v * v;
      return g(s) * 2.0 * v /
             std::sqrt(std::max(ctx.d_offset(delta, s) + da, kFloor));
    };
    return integrate(gv, 0.0, std::sqrt(hi - lo), rel_tol);
  }
  if (at_hi) {
    const double delta0 = hi - ctx.s_star;
    auto gv = [&](double v) {
      const double delta = delta0 - v * v;
      const double s = hi - v * v;
      return g(s) * 2.0 * v /
             std::sqrt(std::max(ctx.d_offset(delta, s) + da, kFloor));
    };
    return integrate(gv, 0.0, std::sqrt(hi - lo), rel_tol);
  }
  auto plain = [&](double s) {
    return g(s) / std::sqrt(std::max(ctx.d(s) + da, kFloor));
  };
  return integrate(plain, lo, hi, rel_tol);
}

/// log Phi(alpha) = int_1^R a rho(s) / sqrt(d(s) + da) ds with da = alpha - alpha0.
template <class Ctx>
QuadResult log_phi_integral(const Ctx& ctx, double R, double da, double rel_tol) {
  const Metric& m = *ctx.metric;
  const double a = ctx.weights.a;
  auto g = [&m, a](double s) { return a * m.rho(s); };
  return sqrt_weighted_integral(ctx, g, 1.0, R, da, rel_tol);
}

struct LogBound {
  double log_r_max = 0.0;  ///< +inf when the critical integral diverges
  bool converged = true;
};

/// log of the feasibility bound r_max (defined in nitsche.cpp).
LogBound log_nitsche_bound(const WeightContext& ctx, double R, double rel_tol);

/// True when the weight is constant (within rounding) in a neighborhood of
/// its minimizer, which makes the critical integral diverge outright.
inline bool weight_flat_near_min(const WeightContext& ctx, double R) {
  const double span = R - 1.0;
  const double tol = 1e-12 * std::max(1.0, std::abs(ctx.w_min));
  int flat = 0;
  for (int i = -4; i <= 4; ++i) {
    if (i == 0) continue;
    const double s = ctx.s_star + i * 0.01 * span;
    if (s < 1.0 || s > R) continue;
    if (std::abs(weight(*ctx.metric, ctx.weights, s) - ctx.w_min) <= tol) ++flat;
  }
  return flat >= 2;
}

}  // namespace rhomap::detail
