#include "rhomap/extremal.hpp"

#include <cmath>

#include "rhomap/energy.hpp"
#include "rhomap/errors.hpp"
#include "rhomap/roots.hpp"
#include "weighted_integral.hpp"

namespace rhomap {

namespace {

constexpr double kLogOverflow = 700.0;
constexpr double kHdotFloor = 1e-300;

// alpha is admitted down to alpha0 itself (the critical boundary, where the
// integrand keeps an integrable endpoint singularity); anything measurably
// below is rejected.
double admissible_da(double alpha, double alpha0) {
  const double slack = 1e-12 * (1.0 + std::abs(alpha0));
  if (alpha < alpha0 - slack)
    throw SingularIntegrand("alpha below the admissible threshold alpha0");
  return std::max(alpha - alpha0, 0.0);
}

}  // namespace

void RadialProfile::validate() const {
  const Eigen::Index n = t.size();
  if (n < 2 || H.size() != n || Hdot.size() != n)
    throw NonMonotoneProfile("profile: need matching t/H/Hdot with >= 2 samples");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(Hdot[i] > 0.0))
      throw NonMonotoneProfile("profile: Hdot must be positive");
    if (i > 0 && !(t[i] > t[i - 1] && H[i] > H[i - 1]))
      throw NonMonotoneProfile("profile: t and H must be strictly increasing");
  }
  if (std::abs(t[0] - 1.0) > 1e-12 || std::abs(H[0] - 1.0) > 1e-12)
    throw NonMonotoneProfile("profile: samples must start at (1, 1)");
  if (std::abs(t[n - 1] - r) > 1e-12 * (1.0 + r))
    throw NonMonotoneProfile("profile: last abscissa must equal r");
  if (std::abs(H[n - 1] - R) > 1e-10 * (1.0 + R))
    throw NonMonotoneProfile("profile: last value must equal R");
}

double phi(const Metric& m, const Weights& wt, double R, double alpha) {
  if (!(R > 1.0)) throw NonPositiveValue("phi: R must exceed 1");
  const auto ctx = detail::make_weight_context(m, wt, R);
  const double da = admissible_da(alpha, ctx.alpha0());
  const QuadResult q = detail::log_phi_integral(ctx, R, da, 1e-10);
  if (q.value > kLogOverflow) return std::numeric_limits<double>::infinity();
  return std::exp(q.value);
}

AlphaSolve solve_alpha_ex(const Metric& m, const Weights& wt,
                          const AnnulusPair& ann, double rel_tol) {
  const auto ctx = detail::make_weight_context(m, wt, ann.R);
  const double a0 = ctx.alpha0();
  const double log_r = std::log(ann.r);

  const auto lb = detail::log_nitsche_bound(ctx, ann.R, 1e-10);
  if (log_r > lb.log_r_max + 1e-12 * (1.0 + std::abs(lb.log_r_max)))
    throw InfeasibleInstance("solve_alpha: r exceeds the feasibility bound");

  // G(alpha) = log Phi(alpha) - log r, strictly decreasing in alpha.
  const double tol_fast = std::max(1e-8, rel_tol);
  auto G = [&](double da, double quad_tol) {
    return detail::log_phi_integral(ctx, ann.R, da, quad_tol).value - log_r;
  };

  // Critical pair: the root would be pinned against alpha0 closer than the
  // sqrt-type sensitivity of Phi there can resolve, so report alpha0 itself.
  if (std::isfinite(lb.log_r_max) &&
      lb.log_r_max - log_r <= 1e-9 * (1.0 + std::abs(log_r)))
    return {a0, true, std::abs(std::expm1(lb.log_r_max - log_r))};

  // Bracket upward from alpha0 + eps by doubling until Phi < r.
  const double eps0 = 1e-8 * (1.0 + std::abs(a0));
  double lo_da = eps0, hi_da = eps0;
  double g_lo = G(lo_da, tol_fast);
  double g_hi = g_lo;
  if (g_lo <= 0.0) {
    // Root lies within (alpha0, alpha0 + eps0): bisect in u with da = u^2,
    // which restores Lipschitz behavior against the sqrt sensitivity.
    auto Gu = [&](double u) { return G(u * u, tol_fast); };
    const double u = brent_root(Gu, 0.0, std::sqrt(eps0),
                                lb.log_r_max - log_r, g_lo, 0.0, 1e-8);
    lo_da = hi_da = u * u;
  } else {
    int doublings = 0;
    do {
      if (++doublings > 1000)
        throw BracketFailure("solve_alpha: no sign change after 1000 doublings");
      lo_da = hi_da;
      g_lo = g_hi;
      hi_da *= 2.0;
      g_hi = G(hi_da, tol_fast);
    } while (g_hi > 0.0);
    const double xtol_rel = 1e-12;
    const double xtol_abs = 1e-12 * (1.0 + std::abs(a0));
    lo_da = hi_da = brent_root([&](double da) { return G(da, tol_fast); }, lo_da,
                               hi_da, g_lo, g_hi, xtol_abs, xtol_rel);
  }

  // Polish with accurate quadrature: secant iteration on G at 1e-12.
  double x0 = lo_da;
  double f0 = G(x0, 1e-12);
  double x1 = x0 * (1.0 + 1e-6) + 1e-14 * (1.0 + std::abs(a0));
  double f1 = G(x1, 1e-12);
  for (int i = 0; i < 8 && std::abs(f1) > 0.5e-10 && f1 != f0; ++i) {
    const double x2 = std::max(x1 - f1 * (x1 - x0) / (f1 - f0), 0.0);
    x0 = x1; f0 = f1;
    x1 = x2; f1 = G(x1, 1e-12);
  }
  if (std::abs(f0) < std::abs(f1)) { x1 = x0; f1 = f0; }
  return {a0 + x1, false, std::abs(std::expm1(f1))};
}

double solve_alpha(const Metric& m, const Weights& wt, const AnnulusPair& ann,
                   double rel_tol) {
  return solve_alpha_ex(m, wt, ann, rel_tol).alpha;
}

RadialProfile build_profile(const Metric& m, const Weights& wt, double alpha,
                            const AnnulusPair& ann, int n) {
  if (n < 16) throw ParseFailure("build_profile: need at least 16 samples");
  const double R = ann.R;
  const auto ctx = detail::make_weight_context(m, wt, R);
  const double da = admissible_da(alpha, ctx.alpha0());

  // Geometric grid in s; x_i = log q(s_i) accumulates panel integrals, so
  // t = exp(x) is exactly 1 at the start and strictly increasing.
  ArrayXd s(n);
  const double logR = std::log(R);
  s[0] = 1.0;
  s[n - 1] = R;
  for (int i = 1; i < n - 1; ++i) s[i] = std::exp(logR * i / (n - 1));

  const double a = wt.a;
  auto g = [&](double u) { return a * m.rho(u); };
  ArrayXd x(n);
  x[0] = 0.0;
  double acc = 0.0, comp = 0.0;
  for (int i = 1; i < n; ++i) {
    const double panel =
        detail::sqrt_weighted_integral(ctx, g, s[i - 1], s[i], da, 1e-10).value;
    const double y = panel - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
    x[i] = acc;
  }
  if (x[n - 1] > kLogOverflow)
    throw SingularIntegrand("build_profile: q(R) overflows; alpha too close to alpha0");

  RadialProfile p;
  p.t = x.exp();
  p.t[0] = 1.0;
  p.H = s;
  p.R = R;
  p.r = p.t[n - 1];
  if (std::abs(p.r - ann.r) <= 1e-8 * ann.r) {
    // Solved alpha reproduces r to solver tolerance; snap the endpoint so
    // downstream domain checks see the requested radius exactly.
    p.t[n - 1] = ann.r;
    p.r = ann.r;
  }

  // Analytic slopes: dH/dt = sqrt(w(s) + alpha) / (a rho(s) t).
  p.Hdot.resize(n);
  for (int i = 0; i < n; ++i) {
    const double d = std::max(ctx.d(s[i]) + da, 0.0);
    p.Hdot[i] = std::max(std::sqrt(d) / (a * m.rho(s[i]) * p.t[i]), kHdotFloor);
  }
  p.validate();
  return p;
}

namespace {
MonotoneCubic make_profile_interp(const RadialProfile& p) {
  p.validate();
  return MonotoneCubic(p.t, p.H, p.Hdot);
}
}  // namespace

ProfileEvaluator::ProfileEvaluator(const RadialProfile& p)
    : interp_(make_profile_interp(p)) {}

std::pair<double, double> ProfileEvaluator::operator()(double t) const {
  auto [h, hdot] = interp_.value_and_derivative(t);
  return {h, std::max(hdot, kHdotFloor)};
}

std::pair<double, double> eval_H(const RadialProfile& p, double t) {
  return ProfileEvaluator(p)(t);
}

RadialProfile invert_profile(const RadialProfile& p) {
  p.validate();
  RadialProfile inv;
  inv.t = p.H;
  inv.H = p.t;
  inv.Hdot = (1.0 / p.Hdot.max(1e-300)).min(1e300).max(kHdotFloor);
  inv.r = p.R;
  inv.R = p.r;
  return inv;
}

ExtremalSolution solve_extremal(const Metric& m, const Weights& wt,
                                const AnnulusPair& ann, int n, double rel_tol) {
  const AlphaSolve as = solve_alpha_ex(m, wt, ann, rel_tol);
  ExtremalSolution sol;
  sol.alpha = as.alpha;
  sol.boundary_alpha = as.boundary;
  sol.profile = build_profile(m, wt, as.alpha, ann, n);
  sol.energy = radial_energy(m, wt, sol.profile).total;
  sol.distortion = radial_distortion(m, wt, invert_profile(sol.profile));
  const double a0 = -minimize_weight(m, wt, ann.R).w_min;
  const double tol_zero = 1e-10 * (1.0 + std::abs(a0));
  sol.regime = sol.alpha > tol_zero    ? Regime::Elastic
               : sol.alpha >= -tol_zero ? Regime::Conformal
                                        : Regime::NonElastic;
  return sol;
}

}  // namespace rhomap
