#pragma once

#include <Eigen/Core>
#include <memory>
#include <utility>

#include "rhomap/metric.hpp"
#include "rhomap/monotone_cubic.hpp"
#include "rhomap/nitsche.hpp"

namespace rhomap {

/// Sampled radial profile H: [1, r] -> [1, R] of a map H(t) e^(i theta),
/// together with its derivative.  Samples are strictly increasing in both
/// coordinates and Hdot stays positive (floor-clamped at 1e-300).
struct RadialProfile {
  ArrayXd t;     ///< abscissae in [1, r], t[0] = 1
  ArrayXd H;     ///< values in [1, R], H[0] = 1
  ArrayXd Hdot;  ///< dH/dt at the samples
  double r = 0.0;
  double R = 0.0;

  /// Throws NonMonotoneProfile / NonPositiveValue when the invariants fail.
  void validate() const;
};

struct ExtremalSolution {
  double alpha = 0.0;
  bool boundary_alpha = false;  ///< alpha pinned at alpha0 (critical pair)
  RadialProfile profile;
  double energy = 0.0;      ///< combined energy of the forward map
  double distortion = 0.0;  ///< weighted distortion of the inverse map
  Regime regime = Regime::Unknown;
};

/// Phi(alpha) = exp(int_1^R a rho / sqrt(w + alpha) ds): the outer radius the
/// extremal profile with parameter alpha reaches at s = R.  Strictly
/// decreasing in alpha; +inf when the exponent overflows.  Throws
/// SingularIntegrand for alpha below alpha0.
double phi(const Metric& m, const Weights& wt, double R, double alpha);

struct AlphaSolve {
  double alpha = 0.0;
  bool boundary = false;  ///< pinned at alpha0: r sits on the feasibility edge
  double residual = 0.0;  ///< |Phi(alpha) - r| / r achieved
};

/// Solves Phi(alpha) = r by bracketing and Brent iteration.  Throws
/// InfeasibleInstance when r exceeds the feasibility bound and
/// BracketFailure when no bracket is found within the doubling cap.
AlphaSolve solve_alpha_ex(const Metric& m, const Weights& wt,
                          const AnnulusPair& ann, double rel_tol = 1e-10);
double solve_alpha(const Metric& m, const Weights& wt, const AnnulusPair& ann,
                   double rel_tol = 1e-10);

/// Builds the extremal profile for a given alpha >= alpha0 on n samples
/// geometric in s.  The last abscissa is snapped to ann.r when the solved
/// boundary value lands within 1e-8 relative of it.
RadialProfile build_profile(const Metric& m, const Weights& wt, double alpha,
                            const AnnulusPair& ann, int n = 512);

/// Monotone cubic interpolation of a profile; reuses the stored analytic
/// slopes (Fritsch-Carlson limited).  Construct once, evaluate many times.
class ProfileEvaluator {
 public:
  explicit ProfileEvaluator(const RadialProfile& p);
  /// (H(t), Hdot(t)); Hdot floor-clamped at 1e-300.  Throws OutOfDomain
  /// outside [1, r].
  std::pair<double, double> operator()(double t) const;

 private:
  MonotoneCubic interp_;
};

/// One-off interpolation convenience wrapper around ProfileEvaluator.
std::pair<double, double> eval_H(const RadialProfile& p, double t);

/// Swaps the roles of t and H: the profile of the inverse map.
RadialProfile invert_profile(const RadialProfile& p);

/// Full pipeline: solve alpha, build the profile, attach energy, distortion
/// and regime.
ExtremalSolution solve_extremal(const Metric& m, const Weights& wt,
                                const AnnulusPair& ann, int n = 512,
                                double rel_tol = 1e-10);

}  // namespace rhomap
