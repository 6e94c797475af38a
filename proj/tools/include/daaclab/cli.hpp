#ifndef DAACLAB_CLI_HPP_
#define DAACLAB_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace daaclab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitRuntime = 4;

// Parses argv (argv[0] is the program name) and dispatches exactly one verb.
// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace daaclab::cli

#endif  // DAACLAB_CLI_HPP_
