#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "rtsim/activitygen.hpp"
#include "rtsim/fleet.hpp"
#include "rtsim/mobsim.hpp"
#include "rtsim/scoring.hpp"
#include "rtsim/synthpop.hpp"
#include "rtsim/types.hpp"

namespace rtsim {

struct ReplanningConfig {
  std::size_t max_plans = 5;
  double w_select = 0.8;
  double w_mode_mutation = 0.1;
  double w_time_mutation = 0.1;
  double innovation_stop_fraction = 0.8;
  double beta_select = 1.0;
  double score_smoothing = 0.5;  // weight on the newest executed score
  double time_mutation_sigma_sec = 1800.0;
  bool refresh_after_innovation_stop = false;
};

struct ConvergenceConfig {
  int window = 10;
  double epsilon = 1e-3;
};

struct ScenarioPaths {
  std::filesystem::path nodes, links, facilities, chains, od_model, time_models;
  std::optional<std::filesystem::path> scoring_params;
  std::optional<std::filesystem::path> microdata_households, microdata_persons, zone_targets;
  std::optional<std::filesystem::path> population_households, population_persons;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  int max_iterations = 100;
  double sample_fraction = 1.0;
  std::filesystem::path output_dir;
  int threads = 1;

  ScenarioPaths paths;
  fleet::FleetConfig fleet_cfg;
  double rt_c_offset = 0.0;
  TasteFactorConfig taste;
  ReplanningConfig replanning;
  ConvergenceConfig convergence;
  mobsim::MobsimConfig mobsim_cfg;
  int tt_bin_sec = 900;
  double tt_smoothing = 0.3;
  bool in_service_occupied_only = false;
  ParkingLevel parking_default = ParkingLevel::low;
  std::map<Id, ParkingLevel> parking_zone_levels;
  activitygen::PlanGenConfig plangen;

  // Relative paths resolve against the config file's directory. Throws
  // ConfigError with the offending key on any problem.
  static ScenarioConfig load(const std::filesystem::path& config_path);

  // Existence check of every referenced input file.
  void validate_files() const;

  // Stable content hash over the effective configuration.
  std::uint64_t config_hash() const;
  std::string canonical_text() const;
};

void write_scenario_config_json(const std::filesystem::path& path, const ScenarioConfig& cfg);

}  // namespace rtsim
