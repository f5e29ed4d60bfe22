#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rtsim/config.hpp"
#include "rtsim/metrics.hpp"

namespace rtsim::scenario {

struct RunOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> fleet_size;
  std::optional<bool> taste_enabled;
};

struct ScenarioResult {
  metrics::KpiBundle kpis;
  int iterations = 0;
  bool converged = false;
  std::filesystem::path out_dir;
  std::size_t persons = 0;
  std::size_t households = 0;
};

// Full pipeline: population (synthesis or load), initial plans, the
// iterate-execute-score-replan loop until convergence or max_iterations,
// KPI computation and all output files.
ScenarioResult run_scenario(ScenarioConfig cfg);
ScenarioResult run_scenario_file(const std::filesystem::path& config_path,
                                 const RunOverrides& overrides);

// Population synthesis only (the synthesize subcommand).
void run_synthesis(const ScenarioConfig& cfg);

enum class TasteMode { on, off, both };

struct SweepCell {
  int fleet_size = 0;
  bool taste_on = false;
  bool ok = false;
  std::string error;
  ScenarioResult result;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::filesystem::path out_dir;
};

// One run per (fleet size, taste toggle), same seed and therefore identical
// initial population and plans across cells. Cells may run in parallel
// (bounded by threads); a failed cell aborts the remaining cells of its
// toggle. Emits sweep_summary.csv, per-toggle hourly matrices, comparison
// tables when both toggles run, and Fig-style charts.
SweepResult run_sweep(const std::filesystem::path& config_path,
                      const std::vector<int>& fleet_sizes, TasteMode taste,
                      const RunOverrides& overrides);

}  // namespace rtsim::scenario
