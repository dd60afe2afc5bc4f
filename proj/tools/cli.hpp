#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torus::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_invalid_config = 2;

/// Runs `torus-scan` with args (program name excluded). Text output goes to
/// `out`, diagnostics to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a flat `key = value` file into `--key=value` tokens. The special key
/// `subcommand` is returned separately. Throws std::invalid_argument on a
/// malformed line or unreadable file.
std::vector<std::string> config_tokens(const std::string& path, std::string& subcommand);

}  // namespace torus::cli
