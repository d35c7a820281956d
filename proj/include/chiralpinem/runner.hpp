#pragma once

#include <string>

#include "chiralpinem/scenario.hpp"

namespace chiralpinem::runner {

struct RunOptions {
    std::string out_dir = "out";
    std::string beta_file;       // import beta from a binary grid file
    bool profiles = false;       // emit far-field line profiles CSV
    bool keep_sidebands = false; // emit per-order maps / retain momentum fields
};

/// Subcommand entry points; throw on error (ConfigError -> exit 2,
/// ResolutionError -> exit 3 in the CLI wrapper). Every run writes a
/// manifest.json listing all outputs with checksums, plus the resolved
/// config for bit-exact reproduction.
void cmd_nearfield(const scenario::Scenario& sc, const RunOptions& opt);
void cmd_farfield(const scenario::Scenario& sc, const RunOptions& opt);
void cmd_timescan(const scenario::Scenario& sc, const RunOptions& opt);
void cmd_proton(const scenario::Scenario& sc, const RunOptions& opt);

}  // namespace chiralpinem::runner
