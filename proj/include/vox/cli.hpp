// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vox::cli {

enum ExitCode : int { kOk = 0, kBadArgs = 2, kIoError = 3, kDspError = 4 };

/// Runs one command line (without the program name). Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vox::cli
