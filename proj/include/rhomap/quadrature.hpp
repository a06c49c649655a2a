#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "rhomap/errors.hpp"

namespace rhomap {

using Eigen::ArrayXd;

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions = 0;     ///< number of panels in the final partition
  bool converged = true;    ///< false when the tolerance could not be met
};

namespace quad_detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double lo, hi;
  double value;  // K15 estimate
  double err;    // QUADPACK-style error estimate
  bool splittable;
};

inline bool panel_order(const Panel& a, const Panel& b) { return a.err < b.err; }

template <class F>
Panel eval_panel(F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  for (double v : fv)
    if (!std::isfinite(v))
      throw NonFiniteIntegrand("integrand evaluated to a non-finite value");

  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  double resabs = kWgk[7] * std::abs(fv[7]);
  for (int i = 0; i < 7; ++i) {
    const double sum = fv[i] + fv[14 - i];
    resk += kWgk[i] * sum;
    resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) resg += kWg[i / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));

  resk *= h;
  resg *= h;
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(err, 50.0 * eps * resabs);

  const double width_floor =
      8.0 * eps * std::max({std::abs(lo), std::abs(hi), 1e-300});
  return {lo, hi, resk, err, (hi - lo) > width_floor};
}

}  // namespace quad_detail

/// Adaptive Gauss-Kronrod 7-15 integration of f over [lo, hi].
///
/// Optional interior split points seed the initial partition (useful for
/// known kinks or near-singular spots); the worst panel is bisected until
/// the summed error estimate satisfies the relative tolerance or the panel
/// cap is hit.  Failure to converge is reported through the flag, not an
/// exception; non-finite integrand values do throw.
template <class F>
QuadResult integrate(F&& f, double lo, double hi, double rel_tol = 1e-10,
                     std::span<const double> split_points = {},
                     long max_panels = 1000000) {
  using quad_detail::Panel;
  if (!(std::isfinite(lo) && std::isfinite(hi)))
    throw OutOfDomain("integrate: non-finite interval");
  QuadResult out;
  if (lo == hi) return out;
  const double sign = (hi >= lo) ? 1.0 : -1.0;
  if (sign < 0.0) std::swap(lo, hi);

  std::vector<double> cuts{lo};
  for (double s : split_points)
    if (s > lo && s < hi) cuts.push_back(s);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> heap;
  heap.reserve(64);
  double total = 0.0, total_err = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push_back(quad_detail::eval_panel(f, cuts[i], cuts[i + 1]));
    total += heap.back().value;
    total_err += heap.back().err;
  }
  std::make_heap(heap.begin(), heap.end(), quad_detail::panel_order);

  std::vector<Panel> retired;  // panels too narrow to split further
  auto tolerance = [&] { return rel_tol * std::max(std::abs(total), 1e-300); };
  while (total_err > tolerance() &&
         static_cast<long>(heap.size() + retired.size()) < max_panels &&
         !heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), quad_detail::panel_order);
    Panel worst = heap.back();
    heap.pop_back();
    if (!worst.splittable) {
      retired.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    Panel left = quad_detail::eval_panel(f, worst.lo, mid);
    Panel right = quad_detail::eval_panel(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), quad_detail::panel_order);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), quad_detail::panel_order);
  }

  // Re-sum from the final partition to shed the incremental rounding drift.
  heap.insert(heap.end(), retired.begin(), retired.end());
  double value = 0.0, comp = 0.0, err = 0.0;
  for (const Panel& p : heap) {
    const double y = p.value - comp;
    const double t = value + y;
    comp = (t - value) - y;
    value = t;
    err += p.err;
  }
  out.value = sign * value;
  out.abs_error_estimate = err;
  out.subdivisions = static_cast<int>(heap.size());
  out.converged = err <= rel_tol * std::max(std::abs(value), 1e-300) * (1.0 + 1e-12);
  return out;
}

template <class F>
QuadResult integrate(F&& f, double lo, double hi, double rel_tol,
                     std::initializer_list<double> split_points,
                     long max_panels = 1000000) {
  return integrate(std::forward<F>(f), lo, hi, rel_tol,
                   std::span<const double>(split_points.begin(), split_points.size()),
                   max_panels);
}

/// Cumulative integrals int_lo^{grid[i]} f, one entry per grid point.
///
/// Each inter-node panel is integrated independently at the given relative
/// tolerance and the partial sums are accumulated; for f >= 0 the result is
/// exactly nondecreasing because every panel value is a sum of positive
/// Kronrod weights times nonnegative samples.
template <class F>
ArrayXd cumulative(F&& f, double lo, const ArrayXd& grid, double rel_tol = 1e-10) {
  if (grid.size() == 0) return ArrayXd();
  if (grid[0] < lo - 1e-12 * (1.0 + std::abs(lo)))
    throw OutOfDomain("cumulative: grid starts below the lower limit");
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw OutOfDomain("cumulative: grid must be strictly increasing");

  ArrayXd out(grid.size());
  double acc = 0.0, comp = 0.0;
  double prev = lo;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (grid[i] > prev) {
      const double v = integrate(f, prev, grid[i], rel_tol).value;
      const double y = v - comp;
      const double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
      prev = grid[i];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace rhomap
