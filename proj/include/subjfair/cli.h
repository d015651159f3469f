#ifndef SUBJFAIR_CLI_H_
#define SUBJFAIR_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace subjfair {

inline constexpr char kVersion[] = "0.1.0";

// Entry point of the `subjfair` tool. `args` excludes the program name.
// Returns the process exit status: 0 on success, nonzero on any error.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace subjfair

#endif  // SUBJFAIR_CLI_H_
