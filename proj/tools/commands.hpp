#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chshsim::cli {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CHSHSIM_OUTPUT_DIR";

/// Run the command line `args` (args[0] is the program name). Returns the
/// process exit status: 0 success, 1 input/config error, 2 model/runtime error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chshsim::cli
