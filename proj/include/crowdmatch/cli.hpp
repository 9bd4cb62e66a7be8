// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <ostream>

namespace crowdmatch {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

/// Entry point of the `crowdmatch` tool. Output goes to `out`, diagnostics
/// and logs to `err`. Verbosity follows the CROWDMATCH_LOG environment
/// variable (off, error, warn, info, debug; default warn).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace crowdmatch
