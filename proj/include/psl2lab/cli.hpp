#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psl2lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitInternal = 4;

// argv[0] is the program name.  Never throws; errors become exit codes.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// args without the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psl2lab::cli
