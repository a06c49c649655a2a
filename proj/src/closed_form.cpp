#include "rhomap/closed_form.hpp"

#include <cmath>
#include <limits>

#include "rhomap/errors.hpp"
#include "rhomap/roots.hpp"

namespace rhomap {

namespace {

void check_positive(double a, double b, double r, double R) {
  if (!(a > 0.0) || !(b > 0.0)) throw NonPositiveValue("weights must be positive");
  if (!(r > 1.0) || !(R > 1.0)) throw NonPositiveValue("radii must exceed 1");
}

// nu = sqrt(1 + param / b^2) >= 0 (clamped against rounding at the
// critical value param = -b^2).
double nu_of(double param, double b) {
  return std::sqrt(std::max(1.0 + param / (b * b), 0.0));
}

// log of the outer radius reached by the power-law profile with parameter
// nu: log( 2^g (1+nu)^g k / D^g ), D = (1+nu)^2 - kappa2 (nu^2 - 1).
double log_outer_radius(double nu, double gamma, double log_k, double kappa2) {
  const double D = (1.0 + nu) * ((1.0 - kappa2) * nu + (1.0 + kappa2));
  if (!(D > 0.0)) return std::numeric_limits<double>::infinity();
  return gamma * (std::log(2.0 * (1.0 + nu)) - std::log(D)) + log_k;
}

}  // namespace

std::string to_string(ClosedFormFamily family) {
  switch (family) {
    case ClosedFormFamily::Flat: return "flat";
    case ClosedFormFamily::InverseSquare: return "inverse-square";
    case ClosedFormFamily::PowerLaw: return "power-law";
  }
  return "?";
}

double ClosedFormProfile::value(double t) const {
  if (family == ClosedFormFamily::Flat) {
    const double c = a / b;
    const double tau = std::pow(t, 1.0 / c);
    return ((1.0 - param) + (1.0 + param) * tau * tau) / (2.0 * tau);
  }
  const double nu = nu_of(param, b);
  const double gamma = 1.0 / (lambda - 1.0);
  const double A = (1.0 + nu) * (1.0 + nu);
  const double B = param / (b * b);
  const double u = std::pow(t, 2.0 * (lambda - 1.0) * b / a);
  return std::pow(2.0 * (1.0 + nu), gamma) * std::pow(t, b / a) /
         std::pow(A - B * u, gamma);
}

double ClosedFormProfile::derivative(double t) const {
  if (family == ClosedFormFamily::Flat) {
    const double c = a / b;
    const double tau = std::pow(t, 1.0 / c);
    const double dH_dtau = ((1.0 + param) * tau * tau - (1.0 - param)) / (2.0 * tau * tau);
    return dH_dtau * tau / (c * t);
  }
  const double nu = nu_of(param, b);
  const double A = (1.0 + nu) * (1.0 + nu);
  const double B = param / (b * b);
  const double u = std::pow(t, 2.0 * (lambda - 1.0) * b / a);
  return value(t) * (b / (a * t)) * (A + B * u) / (A - B * u);
}

ClosedFormProfile flat_profile(double a, double b, double r, double R) {
  check_positive(a, b, r, R);
  const double Rmin = flat_min_outer_radius(a, b, r);
  if (R < Rmin * (1.0 - 1e-12))
    throw InfeasibleInstance("flat metric: R below cosh((b/a) log r)");
  const double t1c = std::pow(r, b / a);
  const double mu = (2.0 * R * t1c - 1.0 - t1c * t1c) / (t1c * t1c - 1.0);
  return {ClosedFormFamily::Flat, a, b, 0.0, r, R, mu};
}

ClosedFormProfile power_profile(double a, double b, double lambda, double r,
                                double R) {
  check_positive(a, b, r, R);
  if (std::abs(lambda - 1.0) <= 1e-12)
    throw LambdaOne("power-law closed form is undefined at lambda = 1");
  const double rmax = power_max_inner_radius(a, b, lambda, R);
  if (r > rmax * (1.0 + 1e-12))
    throw InfeasibleInstance("power metric: r exceeds the feasibility bound");

  const double gamma = 1.0 / (lambda - 1.0);
  const double log_k = (b / a) * std::log(r);
  const double kappa2 = std::exp(2.0 * (lambda - 1.0) * log_k);
  const double logR = std::log(R);
  auto g = [&](double nu) {
    return log_outer_radius(nu, gamma, log_k, kappa2) - logR;
  };

  double nu = 0.0;
  const double g0 = g(0.0);
  if (g0 < 0.0) {
    // Monotone increasing in nu; expand the upper end toward the pole
    // (lambda > 1) or by doubling (lambda < 1) until it brackets.
    double lo = 0.0, glo = g0, hi = 0.0, ghi = g0;
    bool bracketed = false;
    if (kappa2 > 1.0) {
      const double nu_sup = (1.0 + kappa2) / (kappa2 - 1.0);
      for (int j = 1; j <= 200 && !bracketed; ++j) {
        hi = nu_sup * (1.0 - std::pow(0.5, j));
        ghi = g(hi);
        if (ghi > 0.0) bracketed = true;
        else { lo = hi; glo = ghi; }
      }
    } else {
      hi = 1.0;
      for (int j = 0; j <= 1000 && !bracketed; ++j) {
        ghi = g(hi);
        if (ghi > 0.0) bracketed = true;
        else { lo = hi; glo = ghi; hi *= 2.0; }
      }
    }
    if (!bracketed) throw BracketFailure("power-law closed form: no bracket for nu");
    nu = brent_root(g, lo, hi, glo, ghi, 1e-15, 1e-14);
  }
  const double param = b * b * (nu * nu - 1.0);
  return {ClosedFormFamily::PowerLaw, a, b, lambda, r, R, param};
}

ClosedFormProfile inverse_square_profile(double a, double b, double r, double R) {
  ClosedFormProfile p = power_profile(a, b, 2.0, r, R);
  p.family = ClosedFormFamily::InverseSquare;
  return p;
}

double flat_min_outer_radius(double a, double b, double r) {
  if (!(a > 0.0) || !(b > 0.0)) throw NonPositiveValue("weights must be positive");
  if (!(r > 1.0)) throw NonPositiveValue("r must exceed 1");
  return std::cosh((b / a) * std::log(r));
}

double power_max_inner_radius(double a, double b, double lambda, double R) {
  if (!(a > 0.0) || !(b > 0.0)) throw NonPositiveValue("weights must be positive");
  if (!(R > 1.0)) throw NonPositiveValue("R must exceed 1");
  const double p = std::abs(lambda - 1.0);
  if (p <= 1e-12)
    throw LambdaOne("feasibility bound diverges at lambda = 1");
  return std::exp((a / b) * std::acosh(std::pow(R, p)) / p);
}

}  // namespace rhomap
