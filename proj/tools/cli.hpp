#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace calp::cli {

enum ExitCode : int { ok = 0, diagnostics = 1, resource = 2 };

/// Runs the command line `args` (without the program name) and returns the
/// exit status. All output goes to `out` and `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace calp::cli
