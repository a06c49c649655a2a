#pragma once

#include <Eigen/Core>
#include <utility>

namespace rhomap {

using Eigen::ArrayXd;

/// Shape-preserving cubic Hermite interpolant (Fritsch-Carlson).
///
/// Node slopes either come from the data (the classical PCHIP weighted
/// harmonic mean of adjacent secants) or are supplied by the caller; in both
/// cases they are passed through the Fritsch-Carlson limiter, so monotone
/// data always yields a monotone interpolant.
class MonotoneCubic {
 public:
  /// Slopes estimated from the data (PCHIP).  Requires >= 2 nodes and
  /// strictly increasing x.
  MonotoneCubic(ArrayXd x, ArrayXd y);
  /// Caller-supplied slopes, limited where they would break monotonicity.
  MonotoneCubic(ArrayXd x, ArrayXd y, ArrayXd slopes);

  double value(double x) const;
  double derivative(double x) const;
  std::pair<double, double> value_and_derivative(double x) const;

  double x_min() const { return x_[0]; }
  double x_max() const { return x_[x_.size() - 1]; }

 private:
  void validate_and_limit();
  Eigen::Index locate(double& x) const;

  ArrayXd x_, y_, m_;
};

}  // namespace rhomap
