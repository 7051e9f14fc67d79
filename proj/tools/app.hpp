#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace comsim::app {

enum ExitCode : int { Ok = 0, ConfigFailure = 1, UnstableModel = 2, NumericalFailure = 3 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace comsim::app
