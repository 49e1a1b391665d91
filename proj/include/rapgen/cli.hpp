#pragma once

namespace rapgen {

// Entry point behind the `rapgen` binary.  Returns 0 on success, 2 for
// usage errors, 3 for data errors, 4 for runtime failures.
int run_cli(int argc, const char* const* argv);

}  // namespace rapgen
