#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "l3mhd/config.hpp"

namespace l3mhd {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitAuditFailed = 1, kExitConfigError = 2, kExitSolverError = 3 };

struct CommandContext {
  RunConfig config;
  std::filesystem::path out_dir;  ///< config.output_dir unless overridden
  unsigned jobs = 1;
  std::ostream* log = nullptr;
};

/// Solves, exports the trajectory to out_dir/trajectory, runs the requested
/// audits and writes CSVs plus summary.json. Returns kExitOk iff every audit
/// passes; errors propagate as exceptions.
int command_run(const CommandContext& ctx);
/// Re-runs the audits on the exported trajectory in out_dir/trajectory.
int command_verify(const CommandContext& ctx);
/// Comparative table over config.sweep_dimension and config.sweep_levels.
int command_sweep(const CommandContext& ctx);
/// Stability experiment against a baseline exported by `run` (ConfigError
/// when out_dir/trajectory is missing).
int command_stability(const CommandContext& ctx);
/// Plain-text digest of the summaries in out_dir, also written to report.txt.
int command_report(const CommandContext& ctx);

struct SweepLevel {
  double level = 0.0;
  double distance = 0.0;  ///< to the next level, 0 for the last
  double order = 0.0;     ///< observed order from consecutive distances (dt sweep)
};
struct SweepTable {
  std::string dimension;
  std::vector<SweepLevel> levels;
  bool pass = true;
};
/// dt: distances on the coarsest nodes, pass iff the observed order >= 1.7.
/// n: data drawn on the coarsest grid and zero-padded upward, distances on
/// the finer grid of each pair, pass iff the distances do not grow.
/// epsilon: epsilon_sweep.
SweepTable run_sweep(const RunConfig& config, unsigned jobs);

}  // namespace l3mhd
