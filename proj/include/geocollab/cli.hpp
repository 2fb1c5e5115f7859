#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace geocollab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `geocollab` tool. `args` excludes the program name.
/// Machine output goes to files under --out or to `out`; diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geocollab
