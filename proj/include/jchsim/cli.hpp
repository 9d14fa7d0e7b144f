#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jch {

/// Command-line entry point. Subcommands: dimer-analytic, quench, sweep,
/// open-sweep, init-protocol, detect. `args` excludes the program name.
/// Returns 0 on success, 1 on a runtime failure and 2 on a usage or
/// configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jch
