#pragma once

// The `fmcalc` command line: subcommands dispatch to the engines and emit
// JSON reports (or a two-column table with --table).

#include <ostream>
#include <string>
#include <vector>

namespace fmcalc {

// args excludes the program name. Returns the process exit code:
// 0 ok, 1 parse/config error, 2 hypothesis violation, 3 degenerate case.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fmcalc
