#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsub::cli {

enum ExitCode : int { kOk = 0, kBadInput = 1, kBadConfig = 2 };

/// Runs the tool. `args` excludes the program name.
///
/// Every flag can also be set through DIFFSUB_<SUBCOMMAND>_<FLAG> (dashes
/// become underscores, e.g. DIFFSUB_SIGNAL_NUM_WINDOWS) or through a
/// `--config` file of `key = value` lines. A run manifest JSON is accepted as
/// a config file too. Precedence: flags, environment, config file, defaults.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsub::cli
