#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wlgt::cli {

/// Runs the command line (args excludes the program name). Returns the exit
/// code: 0 success, 1 verification failed, 2 bad input, 3 resource limit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wlgt::cli
