#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mhdrelax::cli {

enum ExitCode : int { kPass = 0, kError = 1, kVerdictFailure = 2 };

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhdrelax::cli
