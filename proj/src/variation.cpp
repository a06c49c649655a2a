#include "rhomap/variation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "rhomap/errors.hpp"

namespace rhomap {

namespace {

using std::complex;
constexpr double kPi = std::numbers::pi;

// sin(pi u) bumps vanishing at u = 0 and u = 1, with the endpoint dust of
// std::sin forced to exact zeros so boundary moduli are untouched.
ArrayXd bump(const ArrayXd& t, double r, int harmonics) {
  ArrayXd u = (t - 1.0) / (r - 1.0);
  ArrayXd out = (harmonics * kPi * u).sin();
  out(0) = 0.0;
  out(u.size() - 1) = 0.0;
  return out;
}

Eigen::RowVectorXcd angular_phase(const ArrayXd& theta, int mode) {
  Eigen::ArrayXcd z =
      (complex<double>(0.0, static_cast<double>(mode)) *
       theta.cast<complex<double>>())
          .exp();
  return z.matrix().transpose();
}

MatrixXcd family_field(const std::string& family, const PolarGridMap& g) {
  const ArrayXd b1 = bump(g.t, g.r, 1);
  if (family == "radial-bump")
    return b1.matrix().cast<complex<double>>() * angular_phase(g.theta, 1);
  if (family == "angular-1")
    return b1.matrix().cast<complex<double>>() * angular_phase(g.theta, 2);
  if (family == "angular-2")
    return b1.matrix().cast<complex<double>>() * angular_phase(g.theta, 3);
  if (family == "random") {
    // Boundary-vanishing trigonometric polynomial with fixed-seed complex
    // Gaussian coefficients, sup-normalized to 1.
    std::mt19937 rng(987654321u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const ArrayXd b2 = bump(g.t, g.r, 2);
    MatrixXcd field = MatrixXcd::Zero(g.t.size(), g.theta.size());
    for (int mode = 0; mode <= 3; ++mode) {
      const complex<double> z(gauss(rng), gauss(rng));
      const ArrayXd& radial = (mode % 2 == 0) ? b1 : b2;
      field += z * (radial.matrix().cast<complex<double>>() *
                    angular_phase(g.theta, mode));
    }
    const double sup = field.array().abs().maxCoeff();
    if (!(sup > 0.0)) throw DegenerateGrid("random perturbation degenerated");
    return field / sup;
  }
  throw ParseFailure("unknown perturbation family: " + family);
}

// Projects moduli in the dust band back onto [1, R]; returns false when a
// modulus exits by more than dust (the perturbation left the annulus).
// force = true projects unconditionally.
bool project_moduli(MatrixXcd& v, double R, double dust, bool force) {
  bool ok = true;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, j));
      if (mag < 1.0 - dust || mag > R + dust) {
        if (!force) return false;
        ok = false;
      }
      if (mag < 1.0)
        v(i, j) *= 1.0 / std::max(mag, 1e-300);
      else if (mag > R)
        v(i, j) *= R / mag;
    }
  }
  return ok || force;
}

}  // namespace

double el_residual(const Metric& m, const Weights& wt,
                   const RadialProfile& p) {
  p.validate();
  const Eigen::Index n = p.t.size();
  if (n < 64) throw DegenerateGrid("Euler-Lagrange residual needs >= 64 samples");

  // y = H as a function of x = log t, with analytic slopes dy/dx = t Hdot.
  ArrayXd x = p.t.log();
  ArrayXd slopes = p.t * p.Hdot;
  MonotoneCubic interp(x, p.H, slopes);

  const double hx = x(n - 1) / static_cast<double>(n - 1);
  ArrayXd y(n);
  for (Eigen::Index j = 0; j < n; ++j)
    y(j) = interp.value(std::min(static_cast<double>(j) * hx, x(n - 1)));

  const double a2 = wt.a * wt.a, b2 = wt.b * wt.b;
  double sup = 0.0;
  for (Eigen::Index j = 1; j + 1 < n; ++j) {
    const double yp = (y(j + 1) - y(j - 1)) / (2.0 * hx);
    const double ypp = (y(j + 1) - 2.0 * y(j) + y(j - 1)) / (hx * hx);
    const double lhs = 2.0 * b2 * y(j) - 2.0 * a2 * ypp;
    const double rho = m.rho(y(j));
    const double ratio = m.rho_prime_ex(y(j)).value / rho;
    const double rhs = (2.0 * a2 * yp * yp - 2.0 * b2 * y(j) * y(j)) * ratio;
    sup = std::max(sup,
                   std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
  }
  return sup;
}

double first_integral_deviation(const Metric& m, const Weights& wt,
                                const RadialProfile& p, double alpha) {
  p.validate();
  const double a2 = wt.a * wt.a, b2 = wt.b * wt.b;
  double dev = 0.0;
  for (Eigen::Index i = 0; i < p.t.size(); ++i) {
    const double rho = m.rho(p.H(i));
    const double c = (a2 * p.t(i) * p.t(i) * p.Hdot(i) * p.Hdot(i) -
                      b2 * p.H(i) * p.H(i)) *
                     rho * rho;
    dev = std::max(dev, std::abs(c - alpha));
  }
  return dev / (1.0 + std::abs(alpha));
}

double duality_check(const Metric& m, const Weights& wt,
                     const ExtremalSolution& sol) {
  const double e = radial_energy(m, wt, sol.profile).total;
  const double k = radial_distortion(m, wt, invert_profile(sol.profile));
  return std::abs(e - k) / std::max({e, k, 1e-300});
}

const std::vector<std::string>& default_perturbation_families() {
  static const std::vector<std::string> kFamilies = {
      "radial-bump", "angular-1", "angular-2", "random", "rotation"};
  return kFamilies;
}

std::vector<PerturbationResult> perturbation_test(
    const Metric& m, const Weights& wt, const ExtremalSolution& sol,
    const std::vector<std::string>& families,
    const std::vector<double>& amplitudes, int nt, int ntheta) {
  const PolarGridMap g0 = lift_profile(sol.profile, nt, ntheta);
  const double e0 = grid_energy(m, wt, g0).total;
  const double dust = 1e-12 * (1.0 + g0.R);

  std::vector<PerturbationResult> out;
  for (const std::string& family : families) {
    if (family == "rotation") {
      for (double eps : amplitudes) {
        auto rotated = [&](double delta) {
          PolarGridMap g = g0;
          g.values *= complex<double>(std::cos(delta), std::sin(delta));
          return grid_energy(m, wt, g).total;
        };
        const double ep = rotated(eps), em = rotated(-eps);
        out.push_back({family, eps, ep - e0, (ep - em) / (2.0 * eps), false});
      }
      continue;
    }

    const MatrixXcd phi = family_field(family, g0);
    auto perturbed = [&](double eps, bool force, bool& ok) {
      PolarGridMap g = g0;
      g.values += eps * phi;
      if (!project_moduli(g.values, g0.R, dust, force)) {
        ok = false;
        return std::numeric_limits<double>::quiet_NaN();
      }
      return grid_energy(m, wt, g).total;
    };

    // Halve every amplitude of the family together when a perturbation
    // leaves the annulus, so ratios across amplitudes stay comparable.
    double scale = 1.0;
    bool reduced = false;
    std::vector<double> ep(amplitudes.size()), em(amplitudes.size());
    for (int attempt = 0;; ++attempt) {
      const bool force = attempt >= 6;
      bool ok = true;
      for (std::size_t k = 0; k < amplitudes.size() && ok; ++k) {
        ep[k] = perturbed(scale * amplitudes[k], force, ok);
        if (ok) em[k] = perturbed(-scale * amplitudes[k], force, ok);
      }
      if (ok || force) break;
      scale *= 0.5;
      reduced = true;
    }
    for (std::size_t k = 0; k < amplitudes.size(); ++k) {
      const double eps = scale * amplitudes[k];
      out.push_back(
          {family, eps, ep[k] - e0, (ep[k] - em[k]) / (2.0 * eps), reduced});
    }
  }
  return out;
}

VerificationReport verify_solution(const Metric& m, const Weights& wt,
                                   const ExtremalSolution& sol, int nt,
                                   int ntheta) {
  VerificationReport rep;
  rep.el_residual_sup = el_residual(m, wt, sol.profile);
  rep.first_integral_dev =
      first_integral_deviation(m, wt, sol.profile, sol.alpha);
  rep.duality_gap_rel = duality_check(m, wt, sol);
  rep.perturbation_results =
      perturbation_test(m, wt, sol, default_perturbation_families(),
                        {0.01, 0.02}, nt, ntheta);
  const double e =
      sol.energy > 0.0 ? sol.energy : radial_energy(m, wt, sol.profile).total;
  rep.fd_first_variation = first_variation_estimate(rep.perturbation_results, e);
  return rep;
}

double first_variation_estimate(const std::vector<PerturbationResult>& rows,
                                double energy) {
  auto partner = [&rows](std::size_t i, double amplitude) -> const PerturbationResult* {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == i || rows[j].family != rows[i].family) continue;
      if (std::abs(rows[j].amplitude - amplitude) <= 1e-9 * amplitude)
        return &rows[j];
    }
    return nullptr;
  };

  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const PerturbationResult& row = rows[i];
    // A row whose half-amplitude sibling exists is the tail of that pair and
    // is already covered by the sibling's extrapolation.
    if (partner(i, 0.5 * row.amplitude) != nullptr) continue;
    // Pairing with the doubled-amplitude sibling cancels the O(eps^2)
    // third-variation term of the centered difference.
    const PerturbationResult* twice = partner(i, 2.0 * row.amplitude);
    const double fd = twice ? (4.0 * row.fd_derivative - twice->fd_derivative) / 3.0
                            : row.fd_derivative;
    worst = std::max(worst, std::abs(fd) / (energy * row.amplitude));
  }
  return worst;
}

std::vector<CheckRow> verification_checks(const VerificationReport& rep,
                                          const ExtremalSolution& sol) {
  const double e = sol.energy > 0.0 ? sol.energy : 1.0;
  std::vector<CheckRow> rows;
  rows.push_back({"el-residual", rep.el_residual_sup, 1e-5,
                  rep.el_residual_sup <= 1e-5});
  rows.push_back({"first-integral", rep.first_integral_dev, 1e-6,
                  rep.first_integral_dev <= 1e-6});
  rows.push_back({"duality-gap", rep.duality_gap_rel, 1e-5,
                  rep.duality_gap_rel <= 1e-5});

  bool have_min = false, have_rot = false;
  double min_de = 0.0, rot = 0.0;
  for (const PerturbationResult& row : rep.perturbation_results) {
    if (row.family == "rotation") {
      rot = std::max(rot, std::abs(row.delta_e) / e);
      have_rot = true;
    } else {
      min_de = have_min ? std::min(min_de, row.delta_e) : row.delta_e;
      have_min = true;
    }
  }
  if (have_min)
    rows.push_back({"perturbation-delta-e", min_de, -1e-6 * e,
                    min_de >= -1e-6 * e});
  rows.push_back({"fd-first-variation", rep.fd_first_variation, 1e-3,
                  rep.fd_first_variation <= 1e-3});
  if (have_rot) rows.push_back({"rotation-flatness", rot, 1e-10, rot <= 1e-10});
  return rows;
}

bool all_checks_pass(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass; });
}

}  // namespace rhomap
