#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mdnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSemantic = 3;
inline constexpr int kExitVerification = 4;

/// Runs the command line front end; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mdnet
