#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kbplugin::cli {

/// Runs one command line (without the program name). Machine output goes to
/// `out`, diagnostics to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace kbplugin::cli
