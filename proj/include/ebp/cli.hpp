#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

namespace ebp {

struct RunConfig {
  std::string command;  // check, normalize, flow, glue, bott, dirac-flip, demo
  std::string input;
  std::string output;
  std::optional<int> grid;
  std::optional<std::pair<double, double>> window;
  std::uint64_t seed = 20240611;
  double tol_ellipticity = 1e-8;
  int modes = 16;
  std::string engine = "both";  // shooting, compression, both
};

enum ExitCode { kExitOk = 0, kExitIdentityFailure = 1, kExitInputError = 2 };

// Human-readable summary goes to out, diagnostics to err; reports are written to config.output.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ebp
