#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ifm {

// Parses and executes one command line (without the program name).
// Exit codes: 0 success, 2 usage or configuration error, 3 numerical-domain
// error.  All report text goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifm
