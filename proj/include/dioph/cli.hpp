#pragma once

// Command-line front end. Exit codes: 0 success, 1 internal error, 2 usage or
// input error, 3 infeasible request.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dioph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 64-bit FNV-1a, used to name cache files.
std::uint64_t fnv1a(std::string_view data);

}  // namespace dioph::cli
