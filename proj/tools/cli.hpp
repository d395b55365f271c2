#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellscan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args[0] is the program name). Reports go to `out`,
/// diagnostics to `err`. Returns kExitOk or kExitUsage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellscan::cli
