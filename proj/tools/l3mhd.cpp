#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "l3mhd/app.hpp"
#include "l3mhd/errors.hpp"

using namespace l3mhd;

int main(int argc, char** argv) {
  CLI::App app{"L3 MHD pseudo-spectral engine and verification harness"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, dimension;
  unsigned jobs = 0;
  std::vector<double> levels, deltas;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out-dir", out_dir, "output directory (overrides output.dir)");
  app.add_option("--jobs", jobs, "concurrent jobs (default 1, or L3MHD_JOBS)")->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", quiet, "no progress lines on stdout");

  auto* run = app.add_subcommand("run", "solve, export the trajectory and run the audits");
  auto* verify = app.add_subcommand("verify", "re-run the audits on an exported trajectory");
  auto* sweep = app.add_subcommand("sweep", "comparative table over epsilon, dt or n");
  sweep->add_option("--dimension", dimension, "epsilon | dt | n")->check(CLI::IsMember({"epsilon", "dt", "n"}));
  sweep->add_option("--levels", levels, "at least three levels")->delimiter(',');
  auto* stability = app.add_subcommand("stability", "perturbed-data stability experiment against a baseline run");
  stability->add_option("--delta", deltas, "perturbation sizes (L3)")->delimiter(',');
  auto* report = app.add_subcommand("report", "digest of the summaries in the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    CommandContext ctx;
    ctx.config = load_config(config_path, l3mhd_environment());
    if (!dimension.empty()) ctx.config.sweep_dimension = dimension;
    if (!levels.empty()) ctx.config.sweep_levels = levels;
    if (!deltas.empty()) ctx.config.stability_deltas = deltas;
    if (!out_dir.empty()) ctx.config.output_dir = out_dir;
    ctx.config.validate();
    ctx.out_dir = ctx.config.output_dir;
    if (jobs == 0) {
      const char* env = std::getenv("L3MHD_JOBS");
      jobs = 1;
      if (env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*env == '\0' || *end != '\0' || v < 1) throw ConfigError("L3MHD_JOBS must be a positive integer");
        jobs = static_cast<unsigned>(v);
      }
    }
    ctx.jobs = jobs;
    ctx.log = quiet ? nullptr : &std::cout;

    if (*run) return command_run(ctx);
    if (*verify) return command_verify(ctx);
    if (*sweep) return command_sweep(ctx);
    if (*stability) return command_stability(ctx);
    if (*report) return command_report(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "l3mhd: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "l3mhd: " << e.what() << "\n";
    return kExitSolverError;
  }
  return kExitConfigError;
}
