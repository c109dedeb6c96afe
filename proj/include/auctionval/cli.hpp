#pragma once

#include <iosfwd>

namespace auctionval {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitNumerical = 4,
  kExitIo = 5,
};

// Subcommands: simulate, estimate, bands, metrics, replicate, ingest, plot.
// "--config FILE" reads flat key=value lines; flags on the command line win.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace auctionval
