#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUnverified = 2;
inline constexpr int kExitDiscrepancy = 3;

// Entry point of the qbench tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbench::cli
