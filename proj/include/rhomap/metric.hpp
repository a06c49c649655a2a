#pragma once

#include <Eigen/Core>
#include <limits>
#include <string>

namespace rhomap {

using Eigen::ArrayXd;

/// Radial target metric rho(s) > 0, defined for s >= 1.
///
/// Three families are supported: the constant metric rho = 1, pure power
/// laws rho(s) = s^(-lambda), and tables of (s, rho) samples interpolated
/// log-linearly (linear in (log s, log rho), which reproduces power laws
/// exactly).
class Metric {
 public:
  enum class Kind { Constant, Power, Tabulated };

  static Metric constant();
  static Metric power(double lambda);
  /// Builds a tabulated metric from strictly increasing abscissae s >= ~1
  /// and positive values rho.  At least 4 samples are required.
  static Metric tabulated(ArrayXd s, ArrayXd rho, std::string origin = "table:<memory>");
  /// Loads a table from a CSV file with header "s,rho".
  static Metric from_csv(const std::string& path);
  /// Parses a metric description: "const", "power:<lambda>", "table:<path>".
  static Metric parse(const std::string& text);

  Kind kind() const { return kind_; }
  /// Exponent lambda for Kind::Power; meaningless otherwise.
  double power_exponent() const { return lambda_; }
  /// Upper end of the evaluable range (finite for tables, +inf otherwise).
  double domain_max() const;
  /// The textual form this metric was created from ("const", "power:2", ...).
  const std::string& text() const { return text_; }

  /// Evaluates rho(s).  Throws OutOfDomain outside the table range.
  double rho(double s) const;

  struct Derivative {
    double value;
    bool one_sided;  ///< true when a boundary forced a one-sided difference
  };
  /// Evaluates rho'(s): analytically for Constant/Power, by central
  /// differences with step max(1e-6, 1e-6*s) for tables (one-sided at the
  /// table edges, reported through the flag).
  Derivative rho_prime_ex(double s) const;
  double rho_prime(double s) const { return rho_prime_ex(s).value; }

 private:
  Metric() = default;

  Kind kind_ = Kind::Constant;
  double lambda_ = 0.0;
  ArrayXd log_s_, log_rho_;  // tabulated nodes in log-log coordinates
  std::string text_ = "const";
};

/// Strictly positive energy weights: a multiplies the normal (radial)
/// derivative, b the tangential one.
struct Weights {
  double a;
  double b;
  Weights(double a_, double b_);
};

/// Inner radii of the two annuli A(1, r) -> A(1, R); both must exceed 1.
struct AnnulusPair {
  double r;  ///< outer radius of the source annulus
  double R;  ///< outer radius of the target annulus
  AnnulusPair(double r_, double R_);
};

/// The weight function w(s) = b^2 s^2 rho(s)^2 controlling feasibility.
double weight(const Metric& m, const Weights& wt, double s);

struct WeightMinimum {
  double s_star;  ///< argmin of w over [1, R]; ties resolved to smallest s
  double w_min;   ///< w(s_star)
};

/// Minimizes w over [1, R] by a geometric grid scan (1025 nodes) refined
/// with golden-section search.  Ties are broken toward the smallest s.
WeightMinimum minimize_weight(const Metric& m, const Weights& wt, double R);

}  // namespace rhomap
