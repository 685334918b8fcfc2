#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cvhbac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation. `args` excludes the program name. Data goes to `out`
// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Flat "key = value" file; '#' starts a comment. Throws std::runtime_error
// with a line number on malformed input.
std::map<std::string, std::string> read_config(const std::string& text);

}  // namespace cvhbac::cli
