#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gtt {

// Batch command-line driver: parses `args` (without the program name),
// executes one subcommand, prints to `out` (results) and `err` (errors).
// Returns the process exit code: 0 success, 1 the checked property failed,
// 2 flag/configuration errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace gtt
