#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tanglekit::cli {

enum ExitCode : int { pass = 0, error = 1, violation = 2, size_cap = 3 };

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tanglekit::cli
