// Command-line front end, callable in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ltwist::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name. Returns the process exit code: 0 when
/// every check passes, 1 on an identity failure, 2 on usage or I/O errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ltwist::cli
