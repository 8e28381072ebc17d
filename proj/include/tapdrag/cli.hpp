#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tapdrag {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitProtocol = 3;
// fuzz / enumerate found a violation or mismatch.
inline constexpr int kExitFindings = 4;

// `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, char** argv);

}  // namespace tapdrag
