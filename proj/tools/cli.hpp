#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace condtab::cli {

// Runs one CLI invocation. args excludes the program name. Returns the
// process exit code: 0 ok, 2 validation, 3 resource cap, 4 internal.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

} // namespace condtab::cli
