#pragma once

namespace harper {

// Full CLI entry point (also used by tests and the acceptance suite).
// Exit codes: 0 success, 1 domain error, 2 resource cap, 3 numeric failure.
int run_cli(int argc, const char* const* argv);

}  // namespace harper
