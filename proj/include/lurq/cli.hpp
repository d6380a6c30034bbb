#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace lurq::cli {

// Exit statuses shared by every verb.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitIncomplete = 3;

// Runs one command line (without the program name). Reports and tables go to
// `out` unless --out names a file; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lurq::cli
