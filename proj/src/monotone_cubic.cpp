#include "rhomap/monotone_cubic.hpp"

#include <algorithm>
#include <cmath>

#include "rhomap/errors.hpp"

namespace rhomap {

namespace {

// PCHIP slope at an interior node: weighted harmonic mean of the adjacent
// secants, zero whenever they differ in sign (Fritsch-Carlson).
double pchip_interior(double h0, double h1, double d0, double d1) {
  if (d0 == 0.0 || d1 == 0.0 || (d0 > 0.0) != (d1 > 0.0)) return 0.0;
  const double w0 = 2.0 * h1 + h0;
  const double w1 = h1 + 2.0 * h0;
  return (w0 + w1) / (w0 / d0 + w1 / d1);
}

// Non-centered three-point endpoint slope, clipped to preserve shape.
double pchip_endpoint(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if ((m > 0.0) != (d0 > 0.0) || d0 == 0.0) m = 0.0;
  else if ((d0 > 0.0) != (d1 > 0.0) && std::abs(m) > 3.0 * std::abs(d0))
    m = 3.0 * d0;
  return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(ArrayXd x, ArrayXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  if (n != y_.size() || n < 2)
    throw ParseFailure("MonotoneCubic: need matching x/y with at least 2 nodes");
  m_.resize(n);
  if (n == 2) {
    m_.setConstant((y_[1] - y_[0]) / (x_[1] - x_[0]));
  } else {
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      const double d0 = (y_[i] - y_[i - 1]) / h0, d1 = (y_[i + 1] - y_[i]) / h1;
      m_[i] = pchip_interior(h0, h1, d0, d1);
    }
    {
      const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
      const double d0 = (y_[1] - y_[0]) / h0, d1 = (y_[2] - y_[1]) / h1;
      m_[0] = pchip_endpoint(h0, h1, d0, d1);
    }
    {
      const double h0 = x_[n - 1] - x_[n - 2], h1 = x_[n - 2] - x_[n - 3];
      const double d0 = (y_[n - 1] - y_[n - 2]) / h0;
      const double d1 = (y_[n - 2] - y_[n - 3]) / h1;
      m_[n - 1] = pchip_endpoint(h0, h1, d0, d1);
    }
  }
  validate_and_limit();
}

MonotoneCubic::MonotoneCubic(ArrayXd x, ArrayXd y, ArrayXd slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes)) {
  if (x_.size() != y_.size() || x_.size() != m_.size() || x_.size() < 2)
    throw ParseFailure("MonotoneCubic: need matching x/y/slopes with at least 2 nodes");
  validate_and_limit();
}

void MonotoneCubic::validate_and_limit() {
  const Eigen::Index n = x_.size();
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw NonMonotoneProfile("MonotoneCubic: x must be strictly increasing");

  // Fritsch-Carlson limiter: slopes must share the sign of both adjacent
  // secants and stay within 3x their magnitude.
  for (Eigen::Index i = 0; i < n; ++i) {
    double lim_lo = -std::numeric_limits<double>::infinity();
    double lim_hi = std::numeric_limits<double>::infinity();
    auto fold = [&](double secant) {
      if (secant > 0.0) {
        lim_lo = std::max(lim_lo, 0.0);
        lim_hi = std::min(lim_hi, 3.0 * secant);
      } else if (secant < 0.0) {
        lim_hi = std::min(lim_hi, 0.0);
        lim_lo = std::max(lim_lo, 3.0 * secant);
      } else {
        lim_lo = lim_hi = 0.0;
      }
    };
    if (i > 0) fold((y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]));
    if (i + 1 < n) fold((y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]));
    m_[i] = std::clamp(m_[i], lim_lo, lim_hi);
  }
}

Eigen::Index MonotoneCubic::locate(double& x) const {
  const Eigen::Index n = x_.size();
  const double lo = x_[0], hi = x_[n - 1];
  const double tol = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
  if (x < lo - tol || x > hi + tol)
    throw OutOfDomain("MonotoneCubic: evaluation point outside the data range");
  x = std::clamp(x, lo, hi);
  const double* begin = x_.data();
  const double* it = std::upper_bound(begin, begin + n, x);
  return std::clamp<Eigen::Index>(it - begin - 1, 0, n - 2);
}

std::pair<double, double> MonotoneCubic::value_and_derivative(double x) const {
  const Eigen::Index k = locate(x);
  const double h = x_[k + 1] - x_[k];
  const double u = (x - x_[k]) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  const double v = h00 * y_[k] + h * h10 * m_[k] + h01 * y_[k + 1] + h * h11 * m_[k + 1];
  const double dh00 = (6.0 * u2 - 6.0 * u) / h;
  const double dh10 = 3.0 * u2 - 4.0 * u + 1.0;
  const double dh01 = (-6.0 * u2 + 6.0 * u) / h;
  const double dh11 = 3.0 * u2 - 2.0 * u;
  const double d = dh00 * y_[k] + dh10 * m_[k] + dh01 * y_[k + 1] + dh11 * m_[k + 1];
  return {v, d};
}

double MonotoneCubic::value(double x) const { return value_and_derivative(x).first; }

double MonotoneCubic::derivative(double x) const {
  return value_and_derivative(x).second;
}

}  // namespace rhomap
