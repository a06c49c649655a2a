#include "rhomap/metric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "rhomap/errors.hpp"
#include "rhomap/roots.hpp"

namespace rhomap {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& tok, const std::string& context) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw ParseFailure("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseFailure("cannot parse number '" + tok + "' in " + context);
  }
}

}  // namespace

Metric Metric::constant() {
  Metric m;
  m.kind_ = Kind::Constant;
  m.text_ = "const";
  return m;
}

Metric Metric::power(double lambda) {
  if (!std::isfinite(lambda)) throw ParseFailure("power metric exponent must be finite");
  Metric m;
  m.kind_ = Kind::Power;
  m.lambda_ = lambda;
  std::ostringstream os;
  os << "power:" << lambda;
  m.text_ = os.str();
  return m;
}

Metric Metric::tabulated(ArrayXd s, ArrayXd rho, std::string origin) {
  if (s.size() != rho.size()) throw ParseFailure("metric table: s and rho sizes differ");
  if (s.size() < 4) throw ParseFailure("metric table needs at least 4 samples");
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(rho[i]))
      throw ParseFailure("metric table contains a non-finite entry");
    if (rho[i] <= 0.0) throw NonPositiveValue("metric table: rho must be > 0");
    if (s[i] <= 0.0) throw NonPositiveValue("metric table: s must be > 0");
    if (i > 0 && s[i] <= s[i - 1])
      throw ParseFailure("metric table: s must be strictly increasing");
  }
  Metric m;
  m.kind_ = Kind::Tabulated;
  m.log_s_ = s.log();
  m.log_rho_ = rho.log();
  m.text_ = std::move(origin);
  return m;
}

Metric Metric::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseFailure("cannot open metric table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseFailure("metric table '" + path + "' is empty");
  if (trim(line) != "s,rho")
    throw ParseFailure("metric table '" + path + "': expected header 's,rho'");
  std::vector<double> s, rho;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    size_t comma = t.find(',');
    if (comma == std::string::npos)
      throw ParseFailure("metric table '" + path + "': missing comma on line " +
                         std::to_string(lineno));
    std::string ctx = path + ":" + std::to_string(lineno);
    s.push_back(parse_double(trim(t.substr(0, comma)), ctx));
    rho.push_back(parse_double(trim(t.substr(comma + 1)), ctx));
  }
  ArrayXd se = Eigen::Map<const ArrayXd>(s.data(), static_cast<Eigen::Index>(s.size()));
  ArrayXd re = Eigen::Map<const ArrayXd>(rho.data(), static_cast<Eigen::Index>(rho.size()));
  return tabulated(se, re, "table:" + path);
}

Metric Metric::parse(const std::string& text) {
  std::string t = trim(text);
  if (t == "const") return constant();
  if (t.rfind("power:", 0) == 0)
    return power(parse_double(t.substr(6), "metric '" + t + "'"));
  if (t.rfind("table:", 0) == 0) return from_csv(t.substr(6));
  throw ParseFailure("unknown metric '" + t + "' (expected const, power:<lambda>, table:<path>)");
}

double Metric::domain_max() const {
  if (kind_ != Kind::Tabulated) return std::numeric_limits<double>::infinity();
  return std::exp(log_s_[log_s_.size() - 1]);
}

double Metric::rho(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw OutOfDomain("rho: s must be positive and finite");
  switch (kind_) {
    case Kind::Constant:
      return 1.0;
    case Kind::Power:
      return std::pow(s, -lambda_);
    case Kind::Tabulated:
      break;
  }
  const double ls = std::log(s);
  const Eigen::Index n = log_s_.size();
  const double lo = log_s_[0], hi = log_s_[n - 1];
  const double tol = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
  if (ls < lo - tol || ls > hi + tol)
    throw OutOfDomain("rho: s outside table range");
  const double x = std::clamp(ls, lo, hi);
  const double* begin = log_s_.data();
  const double* it = std::upper_bound(begin, begin + n, x);
  Eigen::Index k = std::clamp<Eigen::Index>(it - begin - 1, 0, n - 2);
  const double u = (x - log_s_[k]) / (log_s_[k + 1] - log_s_[k]);
  return std::exp((1.0 - u) * log_rho_[k] + u * log_rho_[k + 1]);
}

Metric::Derivative Metric::rho_prime_ex(double s) const {
  if (!(s > 0.0) || !std::isfinite(s))
    throw OutOfDomain("rho_prime: s must be positive and finite");
  switch (kind_) {
    case Kind::Constant:
      return {0.0, false};
    case Kind::Power:
      return {-lambda_ * std::pow(s, -lambda_ - 1.0), false};
    case Kind::Tabulated:
      break;
  }
  const double h = std::max(1e-6, 1e-6 * s);
  const double smin = std::exp(log_s_[0]);
  const double smax = std::exp(log_s_[log_s_.size() - 1]);
  if (s - h >= smin && s + h <= smax)
    return {(rho(s + h) - rho(s - h)) / (2.0 * h), false};
  if (s + h <= smax) return {(rho(s + h) - rho(s)) / h, true};
  if (s - h >= smin) return {(rho(s) - rho(s - h)) / h, true};
  throw OutOfDomain("rho_prime: table too narrow for difference step");
}

Weights::Weights(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw NonPositiveValue("weights a, b must be positive and finite");
}

AnnulusPair::AnnulusPair(double r_, double R_) : r(r_), R(R_) {
  if (!(r > 1.0) || !(R > 1.0) || !std::isfinite(r) || !std::isfinite(R))
    throw NonPositiveValue("annulus radii r, R must be finite and > 1");
}

double weight(const Metric& m, const Weights& wt, double s) {
  const double rho = m.rho(s);
  return wt.b * wt.b * s * s * rho * rho;
}

WeightMinimum minimize_weight(const Metric& m, const Weights& wt, double R) {
  if (!(R > 1.0) || !std::isfinite(R))
    throw NonPositiveValue("minimize_weight: R must be finite and > 1");
  auto w = [&](double s) { return weight(m, wt, s); };

  // Coarse scan on a geometric grid; the strict '<' keeps the smallest
  // argmin when the weight is flat (tie-break toward s = 1).
  const int n = 1025;
  const double logR = std::log(R);
  int best = 0;
  double wbest = w(1.0);
  ArrayXd grid(n);
  grid[0] = 1.0;
  grid[n - 1] = R;
  for (int i = 1; i < n - 1; ++i) grid[i] = std::exp(logR * i / (n - 1));
  for (int i = 1; i < n; ++i) {
    const double wi = w(grid[i]);
    if (wi < wbest) {
      wbest = wi;
      best = i;
    }
  }

  // Golden-section refinement inside the bracketing cells.
  const double lo = grid[std::max(0, best - 1)];
  const double hi = grid[std::min(n - 1, best + 1)];
  double s_star = grid[best];
  if (hi > lo) {
    const double s_ref = golden_section_min(w, lo, hi, 1e-12);
    if (w(s_ref) < wbest) {
      s_star = s_ref;
      wbest = w(s_ref);
    }
  }

  // Endpoints win ties within rounding, preferring the smaller s.
  const double slack = 1e-13 * (1.0 + std::abs(wbest));
  if (w(R) <= wbest - slack) {
    s_star = R;
    wbest = w(R);
  }
  if (w(1.0) <= wbest + slack) {
    s_star = 1.0;
    wbest = w(1.0);
  }
  return {s_star, wbest};
}

}  // namespace rhomap
