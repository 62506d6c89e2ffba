#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jscc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `jscc` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on runtime failure and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace jscc
