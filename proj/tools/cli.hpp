#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dfb::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadArguments = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitDataValidation = 4;
inline constexpr int kExitOperatorFailed = 5;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dfb::cli
