#pragma once

// Command-line front end.  Subcommands cover the standard figure datasets
// (fig1..fig4, derivs), monogamy checks of state files (check), randomized
// inequality campaigns (fuzz) and state-file inspection/creation (state).
//
// Exit codes: 0 success, 2 invalid input (bad files, bad parameter values),
// 3 capacity exceeded (state too large for a requested method), 4 usage
// (unknown flags/subcommands or unsupported method combinations).

namespace monoqt {

int run_cli(int argc, char** argv);

} // namespace monoqt
