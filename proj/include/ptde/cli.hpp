#pragma once

#include <iosfwd>

namespace ptde {

/// Entry point of the `ptde` tool: synth, train, score, eval, roc.
/// Exit codes: 0 success, 1 usage error, 2 data or contract error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptde
