#pragma once

#include <string>
#include <vector>

#include "rhomap/energy.hpp"
#include "rhomap/extremal.hpp"
#include "rhomap/metric.hpp"

namespace rhomap {

/// Energy response to one perturbation family at one amplitude.
struct PerturbationResult {
  std::string family;       ///< "radial-bump", "angular-1", "angular-2",
                            ///< "random", "rotation"
  double amplitude = 0.0;   ///< epsilon (the positive representative)
  double delta_e = 0.0;     ///< grid_energy(h + eps phi) - grid_energy(h)
  double fd_derivative = 0.0;  ///< (dE(+eps) - dE(-eps)) / (2 eps)
  bool amplitude_reduced = false;  ///< halved to stay inside the annulus
};

/// Outcome of the full verification battery for one solved instance.
struct VerificationReport {
  double el_residual_sup = 0.0;     ///< sup interior Euler-Lagrange residual
  double first_integral_dev = 0.0;  ///< max |C(t) - alpha| / (1 + |alpha|)
  double duality_gap_rel = 0.0;     ///< |E - K| / max(E, K)
  std::vector<PerturbationResult> perturbation_results;
  /// Largest first variation per unit energy and amplitude.  The centered
  /// difference fd(eps) carries a genuine O(eps^2) Taylor term (third
  /// variation) on top of the first variation; where a family has rows at
  /// eps and 2 eps, that term is removed by Richardson extrapolation
  /// (4 fd(eps) - fd(2 eps)) / 3 before normalizing, otherwise the raw
  /// |fd| / (energy * eps) is used.
  double fd_first_variation = 0.0;
};

/// Sup over interior points of the Euler-Lagrange residual of the profile:
/// with y = H as a function of x = log t, resampled on a uniform x grid via
/// monotone cubic interpolation and differentiated by central differences,
///   |2 b^2 y - 2 a^2 y'' - (2 a^2 y'^2 - 2 b^2 y^2) rho'(y)/rho(y)|
/// normalized pointwise by 1 + |LHS| + |RHS|.
double el_residual(const Metric& m, const Weights& wt, const RadialProfile& p);

/// Max over the profile samples of |(a^2 t^2 Hdot^2 - b^2 H^2) rho^2(H) -
/// alpha| / (1 + |alpha|): the conserved first integral of the profile ODE.
double first_integral_deviation(const Metric& m, const Weights& wt,
                                const RadialProfile& p, double alpha);

/// Relative gap |E - K| / max(E, K) between the combined energy of the
/// profile and the weighted distortion of its inverse.
double duality_check(const Metric& m, const Weights& wt,
                     const ExtremalSolution& sol);

/// Families evaluated by default: radial-bump, angular-1, angular-2, random,
/// rotation.
const std::vector<std::string>& default_perturbation_families();

/// Evaluates grid_energy(h* + eps phi) - grid_energy(h*) for each family and
/// each +-eps pair (pass positive amplitudes; the negative partners are
/// evaluated internally for the central-difference first variation).
///
/// Perturbations are applied additively in the complex plane; moduli that
/// exit [1, R] by no more than 1e-12 * (1 + R) are re-clamped radially, and
/// larger exits halve every amplitude of the family (up to 6 times, flagged
/// via amplitude_reduced) so the quadratic-scaling comparison across
/// amplitudes stays meaningful.  "rotation" is applied as the exact orbit
/// h* e^(i eps) and never needs clamping.
std::vector<PerturbationResult> perturbation_test(
    const Metric& m, const Weights& wt, const ExtremalSolution& sol,
    const std::vector<std::string>& families,
    const std::vector<double>& amplitudes, int nt = 768, int ntheta = 3072);

/// One pass/fail line of the verification table.
struct CheckRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// The fd_first_variation aggregate described on VerificationReport:
/// Richardson-paired where (eps, 2 eps) rows of a family exist, raw
/// |fd| / (energy * eps) otherwise.
double first_variation_estimate(const std::vector<PerturbationResult>& rows,
                                double energy);

/// Runs the full battery (EL residual, first integral, duality, default
/// perturbation families at amplitudes {0.01, 0.02}).
VerificationReport verify_solution(const Metric& m, const Weights& wt,
                                   const ExtremalSolution& sol, int nt = 768,
                                   int ntheta = 3072);

/// Renders the report against the pinned thresholds:
///   el_residual_sup        <= 1e-5
///   first_integral_dev     <= 1e-6
///   duality_gap_rel        <= 1e-5
///   min family delta_e     >= -1e-6 * E
///   fd_first_variation     <= 1e-3
///   rotation |delta_e|     <= 1e-10 * E
bool all_checks_pass(const std::vector<CheckRow>& rows);
std::vector<CheckRow> verification_checks(const VerificationReport& rep,
                                          const ExtremalSolution& sol);

}  // namespace rhomap
