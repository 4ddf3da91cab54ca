#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hct {

/// Runs one toolkit invocation. Exit codes: 0 when the check is verified or
/// certified, 1 when it is refuted (a witness was found, a chain ordering
/// failed, the identity residual check failed, or the bound was violated),
/// 2 on usage or domain errors. A report is written to `out` on exit 0/1;
/// usage errors describe the expression grammar and flags on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hct
