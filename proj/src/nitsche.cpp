#include "rhomap/nitsche.hpp"

#include <cmath>

#include "rhomap/errors.hpp"
#include "rhomap/extremal.hpp"
#include "weighted_integral.hpp"

namespace rhomap {

namespace {

// exp overflows just above 709; anything this large is reported as +inf.
constexpr double kLogOverflow = 700.0;

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Elastic: return "Elastic";
    case Regime::Conformal: return "Conformal";
    case Regime::NonElastic: return "NonElastic";
    case Regime::Infeasible: return "Infeasible";
    case Regime::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::pair<double, double> alpha0(const Metric& m, const Weights& wt, double R) {
  const WeightMinimum wm = minimize_weight(m, wt, R);
  return {-wm.w_min, wm.s_star};
}

namespace detail {

// log of the feasibility bound; +inf when the critical integral diverges.
LogBound log_nitsche_bound(const WeightContext& ctx, double R, double rel_tol) {
  if (weight_flat_near_min(ctx, R))
    return {std::numeric_limits<double>::infinity(), true};
  const QuadResult q = log_phi_integral(ctx, R, 0.0, rel_tol);
  return {q.value, q.converged};
}

}  // namespace detail

double nitsche_bound(const Metric& m, const Weights& wt, double R) {
  const auto ctx = detail::make_weight_context(m, wt, R);
  const auto lb = detail::log_nitsche_bound(ctx, R, 1e-10);
  if (lb.log_r_max > kLogOverflow) return std::numeric_limits<double>::infinity();
  return std::exp(lb.log_r_max);
}

NitscheReport bound_report(const Metric& m, const Weights& wt, double R) {
  const auto ctx = detail::make_weight_context(m, wt, R);
  const auto lb = detail::log_nitsche_bound(ctx, R, 1e-10);

  NitscheReport rep;
  rep.alpha0 = ctx.alpha0();
  rep.s_star = ctx.s_star;
  rep.r_max = lb.log_r_max > kLogOverflow ? std::numeric_limits<double>::infinity()
                                          : std::exp(lb.log_r_max);
  rep.bound_flagged = !lb.converged;
  rep.feasible = lb.log_r_max > 0.0;
  return rep;
}

NitscheReport classify(const Metric& m, const Weights& wt, const AnnulusPair& ann) {
  const auto ctx = detail::make_weight_context(m, wt, ann.R);
  const auto lb = detail::log_nitsche_bound(ctx, ann.R, 1e-10);

  NitscheReport rep;
  rep.alpha0 = ctx.alpha0();
  rep.s_star = ctx.s_star;
  rep.r_max = lb.log_r_max > kLogOverflow ? std::numeric_limits<double>::infinity()
                                          : std::exp(lb.log_r_max);
  rep.bound_flagged = !lb.converged;

  const double log_r = std::log(ann.r);
  rep.feasible = log_r <= lb.log_r_max + 1e-12 * (1.0 + std::abs(lb.log_r_max));
  if (!rep.feasible) {
    rep.regime = Regime::Infeasible;
    return rep;
  }

  try {
    const AlphaSolve sol = solve_alpha_ex(m, wt, ann);
    rep.alpha = sol.alpha;
    const double tol_zero = 1e-10 * (1.0 + std::abs(rep.alpha0));
    if (rep.alpha > tol_zero)
      rep.regime = Regime::Elastic;
    else if (rep.alpha >= -tol_zero)
      rep.regime = Regime::Conformal;
    else
      rep.regime = Regime::NonElastic;
  } catch (const Error&) {
    rep.regime = Regime::Unknown;
  }
  return rep;
}

}  // namespace rhomap
