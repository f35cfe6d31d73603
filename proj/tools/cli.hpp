#pragma once

#include <string>
#include <vector>

namespace safezone::cli {

inline constexpr const char* kVersionString = "safezone 1.0.0";

// Routes to one of the subcommands. `args` excludes the program name.
// Returns 0 on success, 1 on usage errors, 2 on domain errors; errors print a
// single machine-parsable line ("error: usage: ..." / "error: domain: ...")
// on stderr.
int dispatch(const std::vector<std::string>& args);

} // namespace safezone::cli
