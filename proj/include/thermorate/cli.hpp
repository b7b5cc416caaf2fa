#ifndef THERMORATE_CLI_HPP
#define THERMORATE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace thermorate::cli {

// Exit codes: 0 success, 2 parse error, 3 domain error, 4 divergence or
// non-convergence, 5 cancellation sentinel with no asymptotic fallback.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitDivergence = 4;
inline constexpr int kExitUnreliable = 5;

/// Runs the CLI on the given arguments (excluding argv[0]); CSV goes to
/// `out`, diagnostics to `err`.  Never throws.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace thermorate::cli

#endif
