#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fairpm::cli {

// Runs the command line `args` (program name excluded). Returns the process
// exit code: 0 on success, 1 when a command fails, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairpm::cli
