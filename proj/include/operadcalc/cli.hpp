#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace operadcalc {

/// Runs the command line given as argv-style arguments (without the program
/// name). Writes reports to `out`, diagnostics to `err`.
/// Exit codes: 0 success/pass, 1 suite failure, 2 usage error, 3 budget
/// overrun with a partial report.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace operadcalc
