#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xxchain::cli {

/// Entry point for the command-line front end. `args` includes the program
/// name. Returns 0 on success, 2 on usage errors (including invalid chain
/// parameters) and 1 on computation errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xxchain::cli
