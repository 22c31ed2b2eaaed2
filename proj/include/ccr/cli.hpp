#pragma once

namespace ccr {

/// The `ccr` command-line entry point: simulate, sweep, pareto, verify,
/// replay.  Returns the process exit code: 0 ok, 1 usage or configuration,
/// 2 falsified verification property, 3 runtime or transport failure.
int run_cli(int argc, const char* const* argv);

}  // namespace ccr
