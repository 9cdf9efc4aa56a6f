#pragma once

namespace toa {

/// Exit codes of the toa command.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitSchema = 2,
  kExitResolution = 3,
  kExitIo = 4,
};

/// Entry point of the toa command line tool.
int run_cli(int argc, char** argv);

}  // namespace toa
