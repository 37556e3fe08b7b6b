#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qgate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotConverged = 1;
inline constexpr int kExitInvalid = 2;

/// Entry point behind the `qgate` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgate::cli
