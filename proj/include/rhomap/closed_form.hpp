#pragma once

#include <string>

#include "rhomap/metric.hpp"

namespace rhomap {

/// Metric families with fully explicit extremal profiles.
enum class ClosedFormFamily {
  Flat,           ///< rho = 1
  InverseSquare,  ///< rho = 1/s^2
  PowerLaw,       ///< rho = s^(-lambda), lambda != 1
};

/// Explicit extremal profile H(t) on [1, r] for one of the closed-form
/// families, carrying the solved family parameter (mu, delta or epsilon).
struct ClosedFormProfile {
  ClosedFormFamily family;
  double a, b;
  double lambda;  ///< metric exponent (0 for Flat, 2 for InverseSquare)
  double r, R;
  double param;   ///< mu (Flat), delta (InverseSquare), epsilon (PowerLaw)

  double value(double t) const;
  double derivative(double t) const;
};

std::string to_string(ClosedFormFamily family);

/// rho = 1.  H(t) = ((1 - mu) + (1 + mu) t^(2/c)) / (2 t^(1/c)), c = a/b,
/// with mu fixed by H(r) = R.  Throws InfeasibleInstance when the pair
/// violates R >= cosh((b/a) log r) (the profile would not be monotone).
ClosedFormProfile flat_profile(double a, double b, double r, double R);

/// rho = 1/s^2.  delta is solved from the outer boundary condition by
/// bracketed root finding on the monotone branch.
ClosedFormProfile inverse_square_profile(double a, double b, double r, double R);

/// rho = s^(-lambda), lambda != 1 (LambdaOne otherwise); reduces exactly to
/// inverse_square_profile at lambda = 2.
ClosedFormProfile power_profile(double a, double b, double lambda, double r,
                                double R);

/// Feasibility bound for rho = 1, solved for the outer radius: the smallest
/// R admitting a homeomorphic pair with inner radius r.
double flat_min_outer_radius(double a, double b, double r);

/// Feasibility bound for rho = s^(-lambda), lambda != 1: the largest inner
/// radius r admitted by outer radius R.  Valid on both sides of lambda = 1
/// (the formula continues through |lambda - 1|).
double power_max_inner_radius(double a, double b, double lambda, double R);

}  // namespace rhomap
