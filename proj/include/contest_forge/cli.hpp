#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace contest_forge::cli {

/// Runs the command line (args excludes the program name). Returns 0 on
/// success, 1 on invalid input, 2 when a numerical procedure fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace contest_forge::cli
