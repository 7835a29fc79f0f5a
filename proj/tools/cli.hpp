#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace effcost::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInsufficient = 1;  // analysis-level: too few comparable models
inline constexpr int kInputError = 2;    // parse, validation, missing column, bad flag

// Environment variable naming a directory of <preset>.json hardware files,
// searched before the built-in presets.
inline constexpr const char* kHardwareDirEnv = "EFFCOST_HW_DIR";

// Runs one command line (args excludes the program name). Primary output
// goes to `out`; warnings and machine-readable errors (one JSON object per
// line) go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace effcost::cli
