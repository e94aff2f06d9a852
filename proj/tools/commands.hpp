#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace passgp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

/// Full command-line entry point; returns the process exit code.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Expands "--config FILE" into "--key=value" tokens placed right after the
/// subcommand, so flags given explicitly on the command line still win.
/// Keys for which skip(subcommand, "--key") returns true are dropped, which lets
/// one file serve several subcommands.
std::vector<std::string> expand_config(
    const std::vector<std::string>& args,
    const std::function<bool(const std::string&, const std::string&)>& skip = {});

}  // namespace passgp::cli
