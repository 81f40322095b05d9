#pragma once

/// Entry point of the tracebound command line; returns the process exit
/// code (0 safe, 1 violation, 2 unknown or time limit, 3 usage or input error).
int run_cli(int argc, char** argv);
