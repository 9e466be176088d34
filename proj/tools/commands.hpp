#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mobring::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitValidation = 4;

/// Runs one subcommand. args excludes the program name. Results go to `out`
/// unless --out names a file; diagnostics always go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mobring::cli
