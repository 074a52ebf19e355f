#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixlab::lab {

/// Runs the mixlab command line. Returns the process exit code: 0 on success, 2 on
/// invalid input, 3 when a numerical obstruction stops the experiment.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace mixlab::lab
