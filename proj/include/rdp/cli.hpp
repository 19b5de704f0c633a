#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace rdp::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitNotFound = 1;
inline constexpr int kExitInputError = 2;

/// kDefaultFuel unless RDP_FUEL holds a positive integer.
std::size_t default_fuel();

/// Runs one `rdp` invocation; `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdp::cli
