#pragma once

#include <string>
#include <vector>

namespace deltarep {

// Entry point shared by main() and the tests.  `args` excludes argv[0].
//
// Exit codes: 0 success, 1 verify found the set non-stabilizing, 2 parse or
// validation error, 3 I/O error, 4 budget exhausted with a non-optimal
// incumbent (the report is still written).
int run_cli(const std::vector<std::string>& args);

}  // namespace deltarep
