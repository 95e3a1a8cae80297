#pragma once

#include <iosfwd>

namespace kmg::cli {

/// Exit codes.
inline constexpr int kExitCertified = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUncertified = 2;

/// Entry point shared by kmglobal and the end-to-end tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kmg::cli
