#pragma once

#include <Eigen/Core>
#include <complex>

#include "rhomap/extremal.hpp"
#include "rhomap/metric.hpp"

namespace rhomap {

using Eigen::MatrixXcd;

struct EnergyBreakdown {
  double total = 0.0;       ///< normal + tangential (exact sum)
  double normal = 0.0;      ///< int a^2 |h_N|^2 rho^2 dA
  double tangential = 0.0;  ///< int b^2 |h_T|^2 rho^2 dA
};

/// A map of the annulus [1, r] x [0, 2pi) sampled on a polar grid.
/// values(i, j) = h(t[i] e^{i theta[j]}); theta is uniform with period 2pi
/// (the last column wraps to the first, it is not duplicated).
struct PolarGridMap {
  ArrayXd t;        ///< strictly increasing, t[0] = 1, t[last] = r
  ArrayXd theta;    ///< uniform on [0, 2pi)
  MatrixXcd values; ///< rows follow t, columns follow theta
  double r = 0.0;
  double R = 0.0;

  /// Structural checks: sizes >= 16, spacing, boundary moduli within 1e-9.
  void validate() const;
};

/// Samples h(t e^{i theta}) = H(t) e^{i theta} on an nt x ntheta grid with
/// uniform t.
PolarGridMap lift_profile(const RadialProfile& p, int nt, int ntheta);

/// Combined energy of the radial map: quadrature of
/// 2 pi (a^2 Hdot^2 + b^2 H^2 / t^2) rho(H)^2 t over [1, r] through the
/// interpolated profile.
EnergyBreakdown radial_energy(const Metric& m, const Weights& wt,
                              const RadialProfile& p);

/// Combined energy of an arbitrary grid map by central differences in t and
/// theta and tensor-product trapezoid/periodic quadrature.
EnergyBreakdown grid_energy(const Metric& m, const Weights& wt,
                            const PolarGridMap& g);

/// Weighted distortion of the inverse map described by `inv` (a profile on
/// [1, R] with values in [1, r]): quadrature of
/// 2 pi (b^2 vdot^2 + a^2 v^2 / s^2) s^2 rho(s)^2 / (vdot v) over [1, R].
double radial_distortion(const Metric& m, const Weights& wt,
                         const RadialProfile& inv);

/// Closed form for the distortion of the extremal inverse:
/// 4 pi int a b^2 s^2 rho^3 / sqrt(w + alpha) + 2 pi alpha int a rho / sqrt(w + alpha).
double distortion_closed_form(const Metric& m, const Weights& wt, double alpha,
                              double R);

}  // namespace rhomap
