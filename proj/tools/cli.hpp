#pragma once

#include <iosfwd>

namespace aurc::cli {

// Exit codes besides 0 (success).
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitValidation = 4;
inline constexpr int kExitUndefined = 5;

// Runs one `aurc` invocation. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aurc::cli
