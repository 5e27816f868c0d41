#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mflab {

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code (0, 2, 3 or 4).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mflab
