#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hsieve {

// Runs one command line (without the program name). Exit status: 0 when
// the command ran (the verdict is in the output), 1 for an unknown verdict
// under --strict, 2 for usage or input errors.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hsieve
