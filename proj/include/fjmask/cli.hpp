#ifndef FJMASK_CLI_HPP
#define FJMASK_CLI_HPP

namespace fjmask {

// Full command-line entry point. Returns the process exit code:
// 0 success, 2 parameter error, 3 numerical failure, 4 I/O failure.
int run_cli(int argc, const char* const* argv);

}  // namespace fjmask

#endif
