#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhomap/energy.hpp"
#include "rhomap/extremal.hpp"
#include "rhomap/nitsche.hpp"
#include "rhomap/variation.hpp"

namespace rhomap {

using ordered_json = nlohmann::ordered_json;

/// Deterministic serialization: stable key order (insertion order of the
/// builders below) and every float printed with %.17g.  Non-finite numbers
/// render as null.
std::string dump_json(const ordered_json& j, int indent = 2);

/// %.17g rendering shared by the JSON writer and the CSV emitters.
std::string format_number(double v);

ordered_json to_json(const NitscheReport& rep);
ordered_json to_json(const EnergyBreakdown& e);
ordered_json to_json(const RadialProfile& p);
ordered_json to_json(const ExtremalSolution& sol);
ordered_json to_json(const PerturbationResult& r);
ordered_json to_json(const VerificationReport& rep);
ordered_json to_json(const std::vector<CheckRow>& rows);

/// Profile CSV with header `t,H,Hdot`, one decimal row per sample.
void write_profile_csv(std::ostream& os, const RadialProfile& p);

/// Inverse of write_profile_csv; validates the reassembled profile.
/// Throws ParseFailure on malformed input.
RadialProfile read_profile_csv(std::istream& is);

}  // namespace rhomap
