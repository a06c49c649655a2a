#include "rhomap/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "rhomap/errors.hpp"

namespace rhomap {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void dump(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + '"' + escape(it.key()) + "\": ";
        dump(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += "[\n";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump(item, out, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case nlohmann::detail::value_t::string:
      out += '"' + escape(j.get<std::string>()) + '"';
      return;
    case nlohmann::detail::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::detail::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case nlohmann::detail::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case nlohmann::detail::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const ordered_json& j, int indent) {
  std::string out;
  dump(j, out, indent, 0);
  out += "\n";
  return out;
}

ordered_json to_json(const NitscheReport& rep) {
  ordered_json j;
  j["alpha0"] = rep.alpha0;
  j["s_star"] = rep.s_star;
  j["r_max"] = number_or_null(rep.r_max);
  j["divergent"] = std::isinf(rep.r_max);
  j["feasible"] = rep.feasible;
  j["regime"] = to_string(rep.regime);
  j["alpha"] = number_or_null(rep.alpha);
  j["bound_flagged"] = rep.bound_flagged;
  return j;
}

ordered_json to_json(const EnergyBreakdown& e) {
  ordered_json j;
  j["total"] = e.total;
  j["normal"] = e.normal;
  j["tangential"] = e.tangential;
  return j;
}

ordered_json to_json(const RadialProfile& p) {
  ordered_json j;
  j["r"] = p.r;
  j["R"] = p.R;
  j["t"] = std::vector<double>(p.t.data(), p.t.data() + p.t.size());
  j["H"] = std::vector<double>(p.H.data(), p.H.data() + p.H.size());
  j["Hdot"] = std::vector<double>(p.Hdot.data(), p.Hdot.data() + p.Hdot.size());
  return j;
}

ordered_json to_json(const ExtremalSolution& sol) {
  ordered_json j;
  j["alpha"] = sol.alpha;
  j["boundary_alpha"] = sol.boundary_alpha;
  j["energy"] = sol.energy;
  j["distortion"] = sol.distortion;
  j["regime"] = to_string(sol.regime);
  j["profile"] = to_json(sol.profile);
  return j;
}

ordered_json to_json(const PerturbationResult& r) {
  ordered_json j;
  j["family"] = r.family;
  j["amplitude"] = r.amplitude;
  j["delta_e"] = r.delta_e;
  j["fd_derivative"] = r.fd_derivative;
  j["amplitude_reduced"] = r.amplitude_reduced;
  return j;
}

ordered_json to_json(const VerificationReport& rep) {
  ordered_json j;
  j["el_residual_sup"] = rep.el_residual_sup;
  j["first_integral_dev"] = rep.first_integral_dev;
  j["duality_gap_rel"] = rep.duality_gap_rel;
  j["fd_first_variation"] = rep.fd_first_variation;
  ordered_json rows = ordered_json::array();
  for (const PerturbationResult& r : rep.perturbation_results)
    rows.push_back(to_json(r));
  j["perturbations"] = rows;
  return j;
}

ordered_json to_json(const std::vector<CheckRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const CheckRow& row : rows) {
    ordered_json j;
    j["check"] = row.name;
    j["value"] = row.value;
    j["threshold"] = row.threshold;
    j["pass"] = row.pass;
    arr.push_back(j);
  }
  return arr;
}

void write_profile_csv(std::ostream& os, const RadialProfile& p) {
  os << "t,H,Hdot\n";
  for (Eigen::Index i = 0; i < p.t.size(); ++i)
    os << format_number(p.t(i)) << ',' << format_number(p.H(i)) << ','
       << format_number(p.Hdot(i)) << '\n';
}

RadialProfile read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseFailure("empty profile CSV");
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  if (trim(line) != "t,H,Hdot")
    throw ParseFailure("profile CSV must start with header t,H,Hdot");

  std::vector<double> t, H, Hdot;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    double vals[3];
    for (int k = 0; k < 3; ++k) {
      std::string cell;
      if (!std::getline(row, cell, ','))
        throw ParseFailure("profile CSV line " + std::to_string(lineno) +
                           ": expected 3 columns");
      try {
        std::size_t used = 0;
        vals[k] = std::stod(trim(cell), &used);
      } catch (const std::exception&) {
        throw ParseFailure("profile CSV line " + std::to_string(lineno) +
                           ": bad number '" + cell + "'");
      }
    }
    t.push_back(vals[0]);
    H.push_back(vals[1]);
    Hdot.push_back(vals[2]);
  }
  if (t.size() < 2) throw ParseFailure("profile CSV has fewer than 2 rows");

  RadialProfile p;
  p.t = Eigen::Map<const ArrayXd>(t.data(), static_cast<Eigen::Index>(t.size()));
  p.H = Eigen::Map<const ArrayXd>(H.data(), static_cast<Eigen::Index>(H.size()));
  p.Hdot = Eigen::Map<const ArrayXd>(Hdot.data(),
                                     static_cast<Eigen::Index>(Hdot.size()));
  p.r = t.back();
  p.R = H.back();
  p.validate();
  return p;
}

}  // namespace rhomap
