#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qfrac {

// Runs the qfrac command line (arguments without the program name) and
// returns the process exit code: 0 ok, 1 check failed, 2 usage, 3 numeric error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfrac
