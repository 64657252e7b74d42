#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace repnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConvergence = 2;

/// Runs one `repnet` command. `args` excludes the program name, e.g.
/// {"build", "--out", "ws"}. Returns the process exit status: 0 on success,
/// 1 for validation or input errors, 2 when an iterative method fails to
/// converge. Human-readable output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace repnet
