#pragma once

#include <string>
#include <utility>

#include "rhomap/metric.hpp"

namespace rhomap {

/// Qualitative character of a solved instance, decided by the sign of the
/// conserved parameter alpha (up to tol_zero = 1e-10 * (1 + |alpha0|)).
enum class Regime {
  Elastic,     ///< alpha > 0: stretching dominates
  Conformal,   ///< alpha = 0: the map is t^(b/a) e^(i theta), metric-free
  NonElastic,  ///< alpha0 <= alpha < 0 (includes the critical boundary)
  Infeasible,  ///< r exceeds the feasibility bound
  Unknown,     ///< feasible, but alpha was not (or could not be) solved
};

std::string to_string(Regime regime);

struct NitscheReport {
  double alpha0 = 0.0;
  double s_star = 1.0;
  double r_max = 0.0;        ///< +inf when the bound integral diverges
  bool feasible = false;
  Regime regime = Regime::Unknown;
  double alpha = std::numeric_limits<double>::quiet_NaN();  ///< set when solved
  bool bound_flagged = false;  ///< bound quadrature failed to converge
};

/// (alpha0, s_star): alpha0 = -min of the weight w(s) = b^2 s^2 rho^2 over
/// [1, R], attained at s_star.
std::pair<double, double> alpha0(const Metric& m, const Weights& wt, double R);

/// Largest feasible inner radius r_max = exp(int_1^R a rho / sqrt(w + alpha0)).
/// Returns +inf when the integral diverges (weight flat around its minimum)
/// or its value overflows exp.
double nitsche_bound(const Metric& m, const Weights& wt, double R);

/// Full feasibility report for a concrete annulus pair; solves for alpha
/// when feasible so the regime can be classified.
NitscheReport classify(const Metric& m, const Weights& wt, const AnnulusPair& ann);

/// Report for the outer radius alone (no inner radius to test): alpha0,
/// s_star and r_max are filled in; feasible means some r > 1 is admitted,
/// the regime stays Unknown and alpha stays NaN.
NitscheReport bound_report(const Metric& m, const Weights& wt, double R);

}  // namespace rhomap
