#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bisam::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kData = 3;
inline constexpr int kResource = 4;

/// Runs the tool on `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bisam::cli
