#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "l3mhd/presets.hpp"
#include "l3mhd/scheme.hpp"

namespace l3mhd {

struct AuditRequest {
  std::string name;
  double tolerance = -1.0;  ///< negative: the audit's own default
};

/// Names accepted in the audits list.
const std::vector<std::string>& known_audits();
/// Audits run when the config does not list any.
const std::vector<std::string>& default_audits();

struct RunConfig {
  int n = 16;
  double box_length = 0.0;  ///< 0 selects 2 pi
  bool dealias = true;
  SchemeParams scheme;
  InitialSpec initial;
  std::vector<AuditRequest> audits;
  std::string output_dir = "l3mhd-out";
  std::string sweep_dimension = "epsilon";
  std::vector<double> sweep_levels;
  std::vector<double> stability_deltas{1e-4, 1e-5};
  std::uint64_t stability_seed = 7;

  /// Re-checks every numeric constraint; throws ConfigError.
  void validate() const;
  GridPtr make_grid() const;
};

/// Parses JSON text. Unknown keys and wrong types raise ConfigError.
RunConfig parse_config(const std::string& text);
/// Reads a JSON file ("" gives the defaults), then applies environment
/// overrides L3MHD_<SECTION>_<KEY>=value, e.g. L3MHD_GRID_N=32 or
/// L3MHD_SCHEME_DT=0.0078125.
RunConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& env);
/// Current process environment restricted to the L3MHD_ prefix.
std::map<std::string, std::string> l3mhd_environment();
/// Canonical JSON echo of a config (all keys).
std::string config_json(const RunConfig& c);

}  // namespace l3mhd
