#pragma once

#include <iosfwd>

namespace rhomap {

/// Entry point of the command-line front end (subcommands: bound, solve,
/// verify, energy, sweep, closed-form).  Writes documents to `out`, error
/// JSON to `err`.
///
/// Exit codes: 0 success; 2 argument or input parse error; 3 infeasible
/// instance; 4 numerical failure (including verify runs that miss their
/// thresholds).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace rhomap
