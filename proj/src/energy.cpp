#include "rhomap/energy.hpp"

#include <cmath>
#include <numbers>

#include "rhomap/errors.hpp"
#include "rhomap/quadrature.hpp"
#include "weighted_integral.hpp"

namespace rhomap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Three-point first derivative on a possibly nonuniform grid (second order).
struct Stencil {
  double cm, c0, cp;  // coefficients of f[i-1], f[i], f[i+1]
};

Stencil central(double hm, double hp) {
  return {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
}

// One-sided second-order stencil at the left edge over nodes x0, x1, x2;
// mirror for the right edge.
Stencil forward(double h1, double h2) {
  // derivative at x0: coefficients of f0, f1, f2
  return {-(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2),
          -h1 / (h2 * (h1 + h2))};
}

}  // namespace

void PolarGridMap::validate() const {
  const Eigen::Index nt = t.size(), nth = theta.size();
  if (nt < 16 || nth < 16)
    throw DegenerateGrid("polar grid: need at least 16 x 16 samples");
  if (values.rows() != nt || values.cols() != nth)
    throw DegenerateGrid("polar grid: value matrix does not match the axes");
  for (Eigen::Index i = 1; i < nt; ++i)
    if (!(t[i] > t[i - 1])) throw DegenerateGrid("polar grid: t must increase");
  if (std::abs(t[0] - 1.0) > 1e-12 || std::abs(t[nt - 1] - r) > 1e-12 * (1.0 + r))
    throw DegenerateGrid("polar grid: t must span [1, r]");
  const double dth = kTwoPi / static_cast<double>(nth);
  for (Eigen::Index j = 0; j < nth; ++j)
    if (std::abs(theta[j] - dth * static_cast<double>(j)) > 1e-9)
      throw DegenerateGrid("polar grid: theta must be uniform on [0, 2pi)");
  for (Eigen::Index j = 0; j < nth; ++j) {
    if (std::abs(std::abs(values(0, j)) - 1.0) > 1e-9)
      throw DegenerateGrid("polar grid: |h| must be 1 on the inner boundary");
    if (std::abs(std::abs(values(nt - 1, j)) - R) > 1e-9 * (1.0 + R))
      throw DegenerateGrid("polar grid: |h| must be R on the outer boundary");
  }
}

PolarGridMap lift_profile(const RadialProfile& p, int nt, int ntheta) {
  if (nt < 16 || ntheta < 16)
    throw DegenerateGrid("lift_profile: need at least 16 x 16 samples");
  const ProfileEvaluator ev(p);
  PolarGridMap g;
  g.r = p.r;
  g.R = p.R;
  g.t = ArrayXd::LinSpaced(nt, 1.0, p.r);
  g.theta = ArrayXd::LinSpaced(ntheta, 0.0, kTwoPi * (ntheta - 1) / ntheta);
  Eigen::ArrayXcd ring(ntheta);
  for (int j = 0; j < ntheta; ++j)
    ring[j] = std::polar(1.0, g.theta[j]);
  g.values.resize(nt, ntheta);
  for (int i = 0; i < nt; ++i) {
    const double H = (i == 0) ? 1.0 : (i == nt - 1 ? p.R : ev(g.t[i]).first);
    g.values.row(i) = (H * ring).matrix().transpose();
  }
  return g;
}

EnergyBreakdown radial_energy(const Metric& m, const Weights& wt,
                              const RadialProfile& p) {
  const ProfileEvaluator ev(p);
  const double a2 = wt.a * wt.a, b2 = wt.b * wt.b;
  auto normal = [&](double t) {
    auto [H, Hdot] = ev(t);
    const double rho = m.rho(H);
    return a2 * Hdot * Hdot * rho * rho * t;
  };
  auto tangential = [&](double t) {
    auto [H, Hdot] = ev(t);
    (void)Hdot;
    const double rho = m.rho(H);
    return b2 * H * H / (t * t) * rho * rho * t;
  };
  // The interpolant is a cubic per sample interval: seeding the partition
  // with the knots lets each panel converge immediately.
  std::span<const double> knots(p.t.data() + 1, static_cast<size_t>(p.t.size()) - 2);
  EnergyBreakdown e;
  e.normal = kTwoPi * integrate(normal, 1.0, p.r, 1e-9, knots).value;
  e.tangential = kTwoPi * integrate(tangential, 1.0, p.r, 1e-9, knots).value;
  e.total = e.normal + e.tangential;
  return e;
}

EnergyBreakdown grid_energy(const Metric& m, const Weights& wt,
                            const PolarGridMap& g) {
  g.validate();
  const Eigen::Index nt = g.t.size(), nth = g.theta.size();
  const double a2 = wt.a * wt.a, b2 = wt.b * wt.b;
  const double dth = kTwoPi / static_cast<double>(nth);

  // Per-row stencil coefficients for h_t: second-order one-sided at the two
  // boundary rows, central in between (spacing may be nonuniform).
  ArrayXd cm(nt), c0(nt), cp(nt);
  {
    const Stencil s = forward(g.t[1] - g.t[0], g.t[2] - g.t[1]);
    cm[0] = s.cm, c0[0] = s.c0, cp[0] = s.cp;
  }
  for (Eigen::Index i = 1; i + 1 < nt; ++i) {
    const Stencil s = central(g.t[i] - g.t[i - 1], g.t[i + 1] - g.t[i]);
    cm[i] = s.cm, c0[i] = s.c0, cp[i] = s.cp;
  }
  {
    const Stencil s =
        forward(g.t[nt - 1] - g.t[nt - 2], g.t[nt - 2] - g.t[nt - 3]);
    cm[nt - 1] = -s.cm, c0[nt - 1] = -s.c0, cp[nt - 1] = -s.cp;
  }

  // Tensor quadrature: trapezoid in t (nonuniform), full weights in theta
  // (periodic, so every column carries the same weight).
  ArrayXd wt_t = ArrayXd::Zero(nt);
  for (Eigen::Index i = 0; i + 1 < nt; ++i) {
    const double h = g.t[i + 1] - g.t[i];
    wt_t[i] += 0.5 * h;
    wt_t[i + 1] += 0.5 * h;
  }
  ArrayXd radial_weight = wt_t * g.t;

  const Metric::Kind kind = m.kind();
  const double lam = kind == Metric::Kind::Power ? m.power_exponent() : 0.0;

  // One pass over theta columns; the storage is column-major, so every
  // access below is contiguous and the per-column scratch stays in cache.
  ArrayXd row_normal = ArrayXd::Zero(nt), row_tangential = ArrayXd::Zero(nt);
  Eigen::ArrayXcd htc(nt), hthc(nt);
  ArrayXd rho2(nt);
  for (Eigen::Index j = 0; j < nth; ++j) {
    const auto col = g.values.col(j).array();

    // h_t by the radial stencil.
    htc(0) = cm[0] * col(0) + c0[0] * col(1) + cp[0] * col(2);
    htc.segment(1, nt - 2) = cm.segment(1, nt - 2) * col.segment(0, nt - 2) +
                             c0.segment(1, nt - 2) * col.segment(1, nt - 2) +
                             cp.segment(1, nt - 2) * col.segment(2, nt - 2);
    htc(nt - 1) = cm[nt - 1] * col(nt - 1) + c0[nt - 1] * col(nt - 2) +
                  cp[nt - 1] * col(nt - 3);

    // h_theta by periodic central differences.
    const Eigen::Index jp = j + 1 == nth ? 0 : j + 1;
    const Eigen::Index jm = j == 0 ? nth - 1 : j - 1;
    hthc = (g.values.col(jp).array() - g.values.col(jm).array()) / (2.0 * dth);

    // rho^2(|h|); |h|^2 is enough for the power families.
    switch (kind) {
      case Metric::Kind::Constant:
        row_normal += htc.abs2();
        row_tangential += hthc.abs2();
        continue;
      case Metric::Kind::Power: {
        const ArrayXd mag2 = col.abs2();
        if (lam == 1.0) rho2 = mag2.inverse();
        else if (lam == 2.0) rho2 = (mag2 * mag2).inverse();
        else if (lam == 0.5) rho2 = mag2.rsqrt();
        else if (lam == -1.0) rho2 = mag2;
        else rho2 = (-lam * mag2.log()).exp();
        break;
      }
      default:
        for (Eigen::Index i = 0; i < nt; ++i) {
          const double rho = m.rho(std::abs(g.values(i, j)));
          rho2[i] = rho * rho;
        }
    }
    row_normal += htc.abs2() * rho2;
    row_tangential += hthc.abs2() * rho2;
  }

  EnergyBreakdown e;
  e.normal = a2 * dth * (row_normal * radial_weight).sum();
  e.tangential =
      b2 * dth * (row_tangential * radial_weight / (g.t * g.t)).sum();
  e.total = e.normal + e.tangential;
  return e;
}

double radial_distortion(const Metric& m, const Weights& wt,
                         const RadialProfile& inv) {
  const ProfileEvaluator ev(inv);
  const double a2 = wt.a * wt.a, b2 = wt.b * wt.b;
  auto f = [&](double s) {
    auto [v, vdot] = ev(s);
    const double rho = m.rho(s);
    const double num = b2 * vdot * vdot + a2 * v * v / (s * s);
    return num * s * s * rho * rho / (vdot * v);
  };
  std::span<const double> knots(inv.t.data() + 1, static_cast<size_t>(inv.t.size()) - 2);
  return kTwoPi * integrate(f, 1.0, inv.r, 1e-9, knots).value;
}

double distortion_closed_form(const Metric& m, const Weights& wt, double alpha,
                              double R) {
  const auto ctx = detail::make_weight_context(m, wt, R);
  const double da = alpha - ctx.alpha0();
  if (da < -1e-12 * (1.0 + std::abs(ctx.alpha0())))
    throw SingularIntegrand("distortion_closed_form: alpha below alpha0");
  const double a = wt.a, b2 = wt.b * wt.b;
  auto g1 = [&](double s) {
    const double rho = m.rho(s);
    return a * b2 * s * s * rho * rho * rho;
  };
  auto g2 = [&](double s) { return a * m.rho(s); };
  const double da_clamped = std::max(da, 0.0);
  const double i1 =
      detail::sqrt_weighted_integral(ctx, g1, 1.0, R, da_clamped, 1e-10).value;
  const double i2 =
      detail::sqrt_weighted_integral(ctx, g2, 1.0, R, da_clamped, 1e-10).value;
  return 2.0 * kTwoPi * i1 + kTwoPi * alpha * i2;
}

}  // namespace rhomap
