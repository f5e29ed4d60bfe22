#pragma once

#include <cstdint>
#include <filesystem>

#include "rtsim/config.hpp"

namespace rtsim::demo {

struct DemoParams {
  int grid_n = 12;           // grid_n x grid_n Manhattan network
  int zones_per_side = 4;    // zones_per_side^2 population zones
  int persons_target = 20000;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
  int default_fleet_size = 100;
  int max_iterations = 60;
};

// Writes the full input file set (network, zones/targets, microdata,
// facilities, chains, time models, od model, scoring params) plus a ready
// config.json into out_dir. Deterministic for a fixed seed.
ScenarioConfig generate_demo_scenario(const DemoParams& params);

}  // namespace rtsim::demo
