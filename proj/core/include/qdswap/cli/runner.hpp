#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace qdswap {

/// Scenario-runner options, normally populated from the command line.
struct RunOptions {
  std::string verb;         // source | hom | swap | tomo | rates | match
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;   // overrides the config seed
  std::optional<std::string> mode;     // overrides the scenario mode variant
  int threads = 1;
  std::optional<std::uint64_t> shots;  // Monte Carlo budget for the swap oracle
  bool allow_detuned = false;          // run the detuned control instead of erroring
  std::string tomo_counts_path;        // reconstruct from a count-table CSV
};

/// Executes a verb against a config, writing deterministic CSV/JSON artifacts
/// into out_dir. Returns the process exit code: 0 success, 2 parse or
/// validation error, 3 physics error, 4 insufficient statistics. Failures also
/// emit a single-line machine-readable JSON error report on stderr.
int run(const RunOptions& options);

}  // namespace qdswap
