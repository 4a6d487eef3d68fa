#pragma once

#include <iosfwd>

namespace simbloom::cli {

// sysexits-style codes used by the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitWarn = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitIo = 74;

// Entry point shared by main() and the tests. Passwords are read from `in`;
// when `in` is the terminal the prompt does not echo.
auto run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) -> int;

}  // namespace simbloom::cli
