#include "rhomap/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rhomap/closed_form.hpp"
#include "rhomap/energy.hpp"
#include "rhomap/errors.hpp"
#include "rhomap/extremal.hpp"
#include "rhomap/metric.hpp"
#include "rhomap/nitsche.hpp"
#include "rhomap/serialize.hpp"
#include "rhomap/variation.hpp"

namespace rhomap {

namespace {

struct CommonOpts {
  std::string metric = "const";
  double a = 1.0;
  double b = 1.0;
  double r = 0.0;
  double R = 0.0;
  int samples = 512;
  double tol = 1e-10;
  std::string format = "json";
  std::string out_path;
  std::string profile_path;
  std::string a_list, b_list = "1", r_list, R_list;
};

void add_instance_flags(CLI::App* sub, CommonOpts& o, bool need_r) {
  sub->add_option("--metric", o.metric, "const | power:<lambda> | table:<path>")
      ->capture_default_str();
  sub->add_option("--a", o.a, "weight of the normal derivative")
      ->capture_default_str();
  sub->add_option("--b", o.b, "weight of the tangential derivative")
      ->capture_default_str();
  CLI::Option* r_opt =
      sub->add_option("--r", o.r, "outer radius of the source annulus");
  if (need_r) r_opt->required();
  sub->add_option("--R", o.R, "outer radius of the target annulus")->required();
}

void add_output_flags(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--format", o.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", o.out_path, "write to this file instead of stdout");
}

void add_solver_flags(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--samples", o.samples, "profile sample count")
      ->check(CLI::Range(64, 1 << 20))
      ->capture_default_str();
  sub->add_option("--tol", o.tol, "solver relative tolerance")
      ->capture_default_str();
}

void emit(const std::string& doc, const CommonOpts& o, std::ostream& out) {
  if (o.out_path.empty()) {
    out << doc;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + o.out_path);
  f << doc;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseFailure(std::string(flag) + ": bad number '" + cell + "'");
    }
  }
  if (out.empty())
    throw ParseFailure(std::string(flag) + ": expected a comma-separated list");
  return out;
}

ordered_json instance_header(const Metric& m, const CommonOpts& o) {
  ordered_json j;
  j["metric"] = m.text();
  j["a"] = o.a;
  j["b"] = o.b;
  if (o.r > 0.0) j["r"] = o.r;
  j["R"] = o.R;
  return j;
}

int run_bound(const CommonOpts& o, bool has_r, std::ostream& out) {
  const Metric m = Metric::parse(o.metric);
  const Weights wt(o.a, o.b);
  const NitscheReport rep =
      has_r ? classify(m, wt, AnnulusPair(o.r, o.R)) : bound_report(m, wt, o.R);
  if (o.format == "csv") {
    std::ostringstream os;
    os << "alpha0,s_star,r_max,divergent,feasible,regime,alpha,bound_flagged\n"
       << format_number(rep.alpha0) << ',' << format_number(rep.s_star) << ','
       << (std::isinf(rep.r_max) ? "" : format_number(rep.r_max)) << ','
       << (std::isinf(rep.r_max) ? "true" : "false") << ','
       << (rep.feasible ? "true" : "false") << ',' << to_string(rep.regime)
       << ',' << (std::isnan(rep.alpha) ? "" : format_number(rep.alpha)) << ','
       << (rep.bound_flagged ? "true" : "false") << '\n';
    emit(os.str(), o, out);
  } else {
    ordered_json j = instance_header(m, o);
    j.update(to_json(rep));
    emit(dump_json(j), o, out);
  }
  return 0;
}

int run_solve(const CommonOpts& o, std::ostream& out) {
  const Metric m = Metric::parse(o.metric);
  const Weights wt(o.a, o.b);
  const ExtremalSolution sol =
      solve_extremal(m, wt, AnnulusPair(o.r, o.R), o.samples, o.tol);
  if (o.format == "csv") {
    std::ostringstream os;
    write_profile_csv(os, sol.profile);
    emit(os.str(), o, out);
  } else {
    ordered_json j = instance_header(m, o);
    j.update(to_json(sol));
    emit(dump_json(j), o, out);
  }
  return 0;
}

int run_verify(const CommonOpts& o, std::ostream& out) {
  const Metric m = Metric::parse(o.metric);
  const Weights wt(o.a, o.b);
  const ExtremalSolution sol =
      solve_extremal(m, wt, AnnulusPair(o.r, o.R), o.samples, o.tol);
  const VerificationReport rep = verify_solution(m, wt, sol);
  const std::vector<CheckRow> rows = verification_checks(rep, sol);
  const bool pass = all_checks_pass(rows);

  if (o.format == "csv") {
    std::ostringstream os;
    os << "check,value,threshold,pass\n";
    for (const CheckRow& row : rows)
      os << row.name << ',' << format_number(row.value) << ','
         << format_number(row.threshold) << ',' << (row.pass ? "true" : "false")
         << '\n';
    emit(os.str(), o, out);
  } else {
    ordered_json j = instance_header(m, o);
    j["alpha"] = sol.alpha;
    j["energy"] = sol.energy;
    j["distortion"] = sol.distortion;
    j["regime"] = to_string(sol.regime);
    j["report"] = to_json(rep);
    j["checks"] = to_json(rows);
    j["pass"] = pass;
    emit(dump_json(j), o, out);
  }
  return pass ? 0 : 4;
}

int run_energy(const CommonOpts& o, std::ostream& out) {
  const Metric m = Metric::parse(o.metric);
  const Weights wt(o.a, o.b);
  std::ifstream f(o.profile_path);
  if (!f) throw ParseFailure("cannot open profile CSV: " + o.profile_path);
  const RadialProfile p = read_profile_csv(f);
  const EnergyBreakdown e = radial_energy(m, wt, p);
  if (o.format == "csv") {
    std::ostringstream os;
    os << "total,normal,tangential\n"
       << format_number(e.total) << ',' << format_number(e.normal) << ','
       << format_number(e.tangential) << '\n';
    emit(os.str(), o, out);
  } else {
    emit(dump_json(to_json(e)), o, out);
  }
  return 0;
}

int run_sweep(const CommonOpts& o, std::ostream& out) {
  const Metric m = Metric::parse(o.metric);
  const std::vector<double> as = parse_list(o.a_list, "--a");
  const std::vector<double> bs = parse_list(o.b_list, "--b");
  const std::vector<double> rs = parse_list(o.r_list, "--r");
  const std::vector<double> Rs = parse_list(o.R_list, "--R");

  struct Row {
    double a, b, r, R;
    std::string status;
    std::optional<double> alpha, energy, distortion;
    Regime regime = Regime::Unknown;
  };
  std::vector<Row> rows;
  for (double a : as)
    for (double b : bs)
      for (double r : rs)
        for (double R : Rs) {
          Row row{a, b, r, R, "ok", {}, {}, {}, Regime::Unknown};
          try {
            const ExtremalSolution sol =
                solve_extremal(m, Weights(a, b), AnnulusPair(r, R), o.samples,
                               o.tol);
            row.alpha = sol.alpha;
            row.energy = sol.energy;
            row.distortion = sol.distortion;
            row.regime = sol.regime;
          } catch (const InfeasibleInstance&) {
            row.status = "infeasible";
            row.regime = Regime::Infeasible;
          } catch (const Error&) {
            row.status = "error";
          }
          rows.push_back(std::move(row));
        }

  if (o.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const Row& row : rows) {
      ordered_json j;
      j["metric"] = m.text();
      j["a"] = row.a;
      j["b"] = row.b;
      j["r"] = row.r;
      j["R"] = row.R;
      j["status"] = row.status;
      j["alpha"] = row.alpha ? ordered_json(*row.alpha) : ordered_json(nullptr);
      j["energy"] =
          row.energy ? ordered_json(*row.energy) : ordered_json(nullptr);
      j["distortion"] =
          row.distortion ? ordered_json(*row.distortion) : ordered_json(nullptr);
      j["regime"] = to_string(row.regime);
      arr.push_back(j);
    }
    emit(dump_json(arr), o, out);
  } else {
    std::ostringstream os;
    os << "metric,a,b,r,R,status,alpha,energy,distortion,regime\n";
    for (const Row& row : rows) {
      os << m.text() << ',' << format_number(row.a) << ','
         << format_number(row.b) << ',' << format_number(row.r) << ','
         << format_number(row.R) << ',' << row.status << ','
         << (row.alpha ? format_number(*row.alpha) : "") << ','
         << (row.energy ? format_number(*row.energy) : "") << ','
         << (row.distortion ? format_number(*row.distortion) : "") << ','
         << to_string(row.regime) << '\n';
    }
    emit(os.str(), o, out);
  }
  return 0;
}

int run_closed_form(const CommonOpts& o, std::ostream& out) {
  const Metric m = Metric::parse(o.metric);
  const Weights wt(o.a, o.b);

  ClosedFormProfile cf{ClosedFormFamily::Flat, o.a, o.b, 0.0, o.r, o.R, 0.0};
  if (m.kind() == Metric::Kind::Constant) {
    cf = flat_profile(o.a, o.b, o.r, o.R);
  } else if (m.kind() == Metric::Kind::Power) {
    const double lambda = m.power_exponent();
    cf = (lambda == 2.0) ? inverse_square_profile(o.a, o.b, o.r, o.R)
                         : power_profile(o.a, o.b, lambda, o.r, o.R);
  } else {
    throw ParseFailure("closed-form requires --metric const or power:<lambda>");
  }

  const ExtremalSolution sol =
      solve_extremal(m, wt, AnnulusPair(o.r, o.R), o.samples, o.tol);

  RadialProfile pcf;
  pcf.t = sol.profile.t;
  pcf.H = pcf.t;
  pcf.Hdot = pcf.t;
  double sup_gap = 0.0;
  for (Eigen::Index i = 0; i < pcf.t.size(); ++i) {
    pcf.H(i) = cf.value(pcf.t(i));
    // The slope may vanish at a critical endpoint; keep the same floor the
    // numeric profiles use.
    pcf.Hdot(i) = std::max(cf.derivative(pcf.t(i)), 1e-300);
    sup_gap = std::max(sup_gap, std::abs(pcf.H(i) - sol.profile.H(i)));
  }
  pcf.r = o.r;
  pcf.R = o.R;
  pcf.validate();
  const double e_cf = radial_energy(m, wt, pcf).total;
  const double e_gap =
      std::abs(e_cf - sol.energy) / std::max({e_cf, sol.energy, 1e-300});

  if (o.format == "csv") {
    std::ostringstream os;
    write_profile_csv(os, pcf);
    emit(os.str(), o, out);
  } else {
    ordered_json j = instance_header(m, o);
    j["family"] = to_string(cf.family);
    j["lambda"] = cf.family == ClosedFormFamily::Flat ? ordered_json(nullptr)
                                                      : ordered_json(cf.lambda);
    j["param"] = cf.param;
    j["alpha_numeric"] = sol.alpha;
    j["sup_profile_gap"] = sup_gap;
    j["energy_closed_form"] = e_cf;
    j["energy_numeric"] = sol.energy;
    j["energy_gap_rel"] = e_gap;
    j["profile"] = to_json(pcf);
    emit(dump_json(j), o, out);
  }
  return 0;
}

int fail(std::ostream& err, const std::string& category,
         const std::string& detail, int code) {
  ordered_json j;
  j["error"] = category;
  j["detail"] = detail;
  err << dump_json(j);
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"extremal radial mappings between circular annuli under a "
               "radial target metric"};
  app.require_subcommand(1);
  CommonOpts o;

  CLI::App* bound = app.add_subcommand(
      "bound", "feasibility bound r_max and instance classification");
  add_instance_flags(bound, o, false);
  add_output_flags(bound, o);

  CLI::App* solve =
      app.add_subcommand("solve", "solve the extremal profile for a pair");
  add_instance_flags(solve, o, true);
  add_solver_flags(solve, o);
  add_output_flags(solve, o);

  CLI::App* verify = app.add_subcommand(
      "verify", "solve, then run the full verification battery");
  add_instance_flags(verify, o, true);
  add_solver_flags(verify, o);
  add_output_flags(verify, o);

  CLI::App* energy =
      app.add_subcommand("energy", "combined energy of a stored profile CSV");
  energy->add_option("--metric", o.metric, "const | power:<lambda> | table:<path>")
      ->capture_default_str();
  energy->add_option("--a", o.a, "weight of the normal derivative")
      ->capture_default_str();
  energy->add_option("--b", o.b, "weight of the tangential derivative")
      ->capture_default_str();
  energy->add_option("--profile", o.profile_path, "profile CSV (t,H,Hdot)")
      ->required();
  add_output_flags(energy, o);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Cartesian sweep over comma-separated parameter lists");
  sweep->add_option("--metric", o.metric, "const | power:<lambda> | table:<path>")
      ->capture_default_str();
  sweep->add_option("--a", o.a_list, "comma-separated weights")->required();
  sweep->add_option("--b", o.b_list, "comma-separated weights")
      ->capture_default_str();
  sweep->add_option("--r", o.r_list, "comma-separated source radii")->required();
  sweep->add_option("--R", o.R_list, "comma-separated target radii")->required();
  add_solver_flags(sweep, o);
  add_output_flags(sweep, o);

  CLI::App* closed = app.add_subcommand(
      "closed-form", "explicit profile for const / power metrics vs numeric");
  add_instance_flags(closed, o, true);
  add_solver_flags(closed, o);
  add_output_flags(closed, o);

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      return fail(err, "parse", e.what(), 2);
    }

    if (bound->parsed()) return run_bound(o, bound->count("--r") > 0, out);
    if (solve->parsed()) return run_solve(o, out);
    if (verify->parsed()) return run_verify(o, out);
    if (energy->parsed()) return run_energy(o, out);
    if (sweep->parsed()) {
      // Sweeps are tabular by nature: default to CSV unless asked otherwise.
      if (sweep->count("--format") == 0) o.format = "csv";
      return run_sweep(o, out);
    }
    if (closed->parsed()) return run_closed_form(o, out);
    return fail(err, "parse", "no subcommand given", 2);
  } catch (const ParseFailure& e) {
    return fail(err, "parse", e.what(), 2);
  } catch (const NonPositiveValue& e) {
    return fail(err, "parse", e.what(), 2);
  } catch (const InfeasibleInstance& e) {
    return fail(err, "infeasible", e.what(), 3);
  } catch (const Error& e) {
    return fail(err, "numerical", e.what(), 4);
  } catch (const std::exception& e) {
    return fail(err, "numerical", e.what(), 4);
  }
}

}  // namespace rhomap
