#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace edgeden {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Parses flat `key = value` lines; `#` starts a comment. Throws IoError on
/// unreadable files or lines without '='.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Runs the tool with `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace edgeden
