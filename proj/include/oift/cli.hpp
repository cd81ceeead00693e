#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oift/scenarios.hpp"

namespace oift {

/// A scenario selection plus validated overrides; mirrors the JSON config
/// schema key for key.
struct RunConfig {
  std::string scenario;
  std::optional<double> dt;
  std::optional<int> max_iter;
  std::optional<double> epsilon;
  std::optional<double> q_p;
  std::optional<double> q_v;
  std::optional<double> r_a;
  std::optional<double> k_r;
  std::optional<double> k_a;
  std::optional<double> k_F;
  std::optional<std::uint64_t> seed;
  std::optional<bool> safe_hessian;
  std::string output_dir;
};

/// Parses a JSON config file into a RunConfig. Throws std::runtime_error on
/// unreadable files, malformed JSON or unknown keys.
RunConfig load_config_file(const std::string& path);

/// Treats the token as a config-file path when such a file exists and as a
/// catalog scenario name otherwise.
RunConfig resolve_config(const std::string& token);

/// Catalog lookup plus overrides; validates the resulting scenario.
Scenario configured_scenario(const RunConfig& config);

/// Runs the scenario and writes trajectory.csv, iterations.csv,
/// cost_terms.csv and metrics.json into the output directory. Returns 0 on
/// converged/max_iter and nonzero on solver errors.
int cmd_run(const RunConfig& config);

/// Derivative/PSD/projection validation suite at iteration 0 of the
/// configured scenario; prints one line per check and returns nonzero when
/// any hard check fails (expected failures with the safe Hessian disabled
/// do not count).
int cmd_check(const RunConfig& config);

/// Runs the scenario once per value of the swept parameter and writes one
/// summary row per run into sweep_summary.csv; per-run artifacts go to
/// per-value subdirectories.
int cmd_sweep(const RunConfig& config, const std::string& parameter,
              const std::vector<double>& values);

}  // namespace oift
