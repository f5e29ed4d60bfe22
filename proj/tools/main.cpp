// rtsim command line: scenario generation, population synthesis, single
// simulation runs and fleet-size sweeps.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtsim/csv.hpp"
#include "rtsim/demo.hpp"
#include "rtsim/errors.hpp"
#include "rtsim/scenario.hpp"
#include "rtsim/version.hpp"

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const rtsim::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rtsim - agent-based robo-taxi fleet sizing simulator"};
  app.set_version_flag("--version", std::string("rtsim ") + rtsim::kVersion);
  app.require_subcommand(1);

  // simulate
  std::string sim_config, sim_out;
  std::uint64_t sim_seed = 0;
  int sim_threads = 0;
  auto* sim = app.add_subcommand("simulate", "Run one scenario to equilibrium");
  sim->add_option("--config", sim_config, "Scenario config file (json)")->required();
  sim->add_option("--out", sim_out, "Output directory (overrides run.output_dir)");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "Seed override");
  sim->add_option("--threads", sim_threads, "Worker thread bound");

  // sweep
  std::string sweep_config, sweep_out, sweep_sizes, sweep_taste = "both";
  std::uint64_t sweep_seed = 0;
  int sweep_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a fleet-size sweep");
  sweep->add_option("--config", sweep_config, "Scenario config file (json)")->required();
  sweep->add_option("--fleet-sizes", sweep_sizes, "Comma separated sizes, e.g. 25,50,100")
      ->required();
  sweep->add_option("--taste", sweep_taste, "on|off|both")->check(
      CLI::IsMember({"on", "off", "both"}));
  sweep->add_option("--out", sweep_out, "Output directory");
  auto* sweep_seed_opt = sweep->add_option("--seed", sweep_seed, "Seed override");
  sweep->add_option("--threads", sweep_threads, "Parallel sweep cells");

  // synthesize
  std::string synth_config, synth_out;
  auto* synth = app.add_subcommand("synthesize", "Generate the synthetic population only");
  synth->add_option("--config", synth_config, "Scenario config file (json)")->required();
  synth->add_option("--out", synth_out, "Output directory");

  // demo
  rtsim::demo::DemoParams demo;
  std::string demo_out = "demo";
  auto* demo_cmd = app.add_subcommand("demo", "Generate a self-contained demo scenario");
  demo_cmd->add_option("--grid-n", demo.grid_n, "Road grid nodes per side")->check(
      CLI::Range(2, 1000));
  demo_cmd->add_option("--zones", demo.zones_per_side, "Zones per side");
  demo_cmd->add_option("--persons", demo.persons_target, "Target population size");
  demo_cmd->add_option("--seed", demo.seed, "Generation seed");
  demo_cmd->add_option("--fleet-size", demo.default_fleet_size, "Default fleet size");
  demo_cmd->add_option("--max-iterations", demo.max_iterations, "Default iteration budget");
  demo_cmd->add_option("--out", demo_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    return guarded([&] {
      rtsim::scenario::RunOverrides ov;
      if (!sim_out.empty()) ov.out_dir = sim_out;
      if (sim_seed_opt->count() > 0) ov.seed = sim_seed;
      if (sim_threads > 0) ov.threads = sim_threads;
      auto res = rtsim::scenario::run_scenario_file(sim_config, ov);
      std::cout << "done: " << res.out_dir.string() << " iterations=" << res.iterations
                << " converged=" << (res.converged ? "true" : "false") << "\n";
      return 0;
    });
  }
  if (sweep->parsed()) {
    return guarded([&] {
      std::vector<int> sizes;
      for (const auto& part : rtsim::csv::split(sweep_sizes, ','))
        sizes.push_back(std::stoi(part));
      rtsim::scenario::TasteMode mode = sweep_taste == "on"
                                            ? rtsim::scenario::TasteMode::on
                                            : sweep_taste == "off"
                                                  ? rtsim::scenario::TasteMode::off
                                                  : rtsim::scenario::TasteMode::both;
      rtsim::scenario::RunOverrides ov;
      if (!sweep_out.empty()) ov.out_dir = sweep_out;
      if (sweep_seed_opt->count() > 0) ov.seed = sweep_seed;
      if (sweep_threads > 0) ov.threads = sweep_threads;
      auto res = rtsim::scenario::run_sweep(sweep_config, sizes, mode, ov);
      int failed = 0;
      for (const auto& cell : res.cells)
        if (!cell.ok) ++failed;
      std::cout << "sweep done: " << res.out_dir.string() << " cells=" << res.cells.size()
                << " failed=" << failed << "\n";
      return failed == 0 ? 0 : 1;
    });
  }
  if (synth->parsed()) {
    return guarded([&] {
      auto cfg = rtsim::ScenarioConfig::load(synth_config);
      if (!synth_out.empty()) cfg.output_dir = synth_out;
      cfg.validate_files();
      rtsim::scenario::run_synthesis(cfg);
      std::cout << "population written to " << cfg.output_dir.string() << "\n";
      return 0;
    });
  }
  if (demo_cmd->parsed()) {
    return guarded([&] {
      demo.out_dir = demo_out;
      rtsim::demo::generate_demo_scenario(demo);
      std::cout << "demo scenario written to " << demo.out_dir.string() << "\n";
      return 0;
    });
  }
  return 2;
}
