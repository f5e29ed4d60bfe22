#include "rtsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "rtsim/activitygen.hpp"
#include "rtsim/csv.hpp"
#include "rtsim/replanning.hpp"
#include "rtsim/rng.hpp"
#include "rtsim/svg.hpp"
#include "rtsim/version.hpp"

namespace rtsim::scenario {

namespace {

// rng stream tags
constexpr std::uint64_t kStreamHome = 0x484F4D45;      // home anchors
constexpr std::uint64_t kStreamPlan = 0x504C414E;      // initial plans
constexpr std::uint64_t kStreamReplan = 0x5245504C;    // replanning

struct LoadedScenario {
  Network net;
  activitygen::FacilitySet facilities;
  activitygen::ChainFrequencyTable chains;
  activitygen::OdModel od;
  activitygen::TimeModels time_models;
  ScoringParams scoring;
  ActivityScoringParams act_scoring;
  Population pop;
  TasteFactorConfig taste;  // normalized
  std::map<Id, double> zone_fitness;
  std::map<Id, bool> zone_warning;
  bool synthesized = false;
};

void apply_sample_fraction(Population& pop, double fraction) {
  if (fraction >= 1.0) return;
  Population kept;
  double acc = 0.0;
  for (const auto& hh : pop.households) {
    acc += fraction;
    if (acc < 1.0) continue;
    acc -= 1.0;
    kept.households.push_back(hh);
    for (Id pid : hh.member_ids) kept.persons.push_back(pop.person(pid));
  }
  kept.rebuild_index();
  pop = std::move(kept);
}

LoadedScenario load_scenario(const ScenarioConfig& cfg) {
  LoadedScenario s;
  s.net = Network::load_csv(cfg.paths.nodes, cfg.paths.links);
  s.facilities = activitygen::FacilitySet::load_csv(cfg.paths.facilities);
  s.chains = activitygen::ChainFrequencyTable::load_csv(cfg.paths.chains);
  s.od = activitygen::OdModel::load_csv(cfg.paths.od_model);
  s.time_models = activitygen::TimeModels::load_csv(cfg.paths.time_models);
  s.scoring = cfg.paths.scoring_params ? ScoringParams::load_csv(*cfg.paths.scoring_params)
                                       : ScoringParams::defaults();
  if (cfg.rt_c_offset != 0.0)
    for (Spc spc : kAllSpc) s.scoring.at(spc, Mode::robotaxi).c += cfg.rt_c_offset;
  s.act_scoring = ActivityScoringParams::defaults();

  if (cfg.paths.population_households) {
    s.pop = Population::load_csv(*cfg.paths.population_households,
                                 *cfg.paths.population_persons);
  } else {
    Population sample = Population::load_csv(*cfg.paths.microdata_households,
                                             *cfg.paths.microdata_persons);
    auto controls = synthpop::default_controls();
    auto targets = synthpop::load_zone_targets_csv(*cfg.paths.zone_targets, controls);
    auto res = synthpop::synthesize_population(sample, targets, controls, cfg.seed);
    s.pop = std::move(res.population);
    s.zone_fitness = std::move(res.zone_fitness);
    s.zone_warning = std::move(res.zone_budget_exhausted);
    s.synthesized = true;
  }
  apply_sample_fraction(s.pop, cfg.sample_fraction);
  s.pop.validate();
  if (s.pop.persons.empty()) throw ConfigError("population is empty");
  s.taste = normalize_taste_factors(s.pop, cfg.taste);
  return s;
}

struct AgentSetup {
  std::vector<mobsim::AgentInput> inputs;           // static coords/links
  std::vector<replanning::PlanMemory> memories;     // parallel to inputs
  std::vector<TasteFactors> factors;                // per agent
  std::vector<PlanScoringContext> contexts;         // per agent
};

ParkingLevel parking_of_zone(const ScenarioConfig& cfg, Id zone) {
  auto it = cfg.parking_zone_levels.find(zone);
  return it == cfg.parking_zone_levels.end() ? cfg.parking_default : it->second;
}

AgentSetup build_agents(const ScenarioConfig& cfg, LoadedScenario& s,
                        const std::filesystem::path& out_dir) {
  AgentSetup setup;
  const auto& pop = s.pop;

  // home anchor per household: gravity-chosen home facility, jittered
  std::map<Id, activitygen::HomeAnchor> anchors;
  for (const auto& hh : pop.households) {
    Rng rng = Rng::derive(cfg.seed, kStreamHome, static_cast<std::uint64_t>(hh.household_id));
    auto centroid_x = 0.0, centroid_y = 0.0;
    auto in_zone = s.facilities.eligible_in_zone(hh.zone_id, ActivityType::Home);
    if (!in_zone.empty()) {
      centroid_x = s.facilities.facilities[in_zone[0]].x;
      centroid_y = s.facilities.facilities[in_zone[0]].y;
    }
    auto choice = activitygen::choose_facility(hh.zone_id, ActivityType::Home, s.facilities,
                                               centroid_x, centroid_y,
                                               cfg.plangen.gravity_theta_m, rng);
    const auto& fac = s.facilities.by_id(choice.facility_id);
    activitygen::HomeAnchor a;
    a.zone_id = hh.zone_id;
    a.facility_id = fac.facility_id;
    a.x = fac.x + rng.uniform(-150.0, 150.0);
    a.y = fac.y + rng.uniform(-150.0, 150.0);
    anchors[hh.household_id] = a;
  }

  // facility -> link cache
  std::map<Id, int> fac_link;
  for (const auto& f : s.facilities.facilities)
    fac_link[f.facility_id] = s.net.nearest_link(f.x, f.y);

  std::vector<std::pair<Id, const DailyPlan*>> plan_rows;
  setup.inputs.reserve(pop.persons.size());
  setup.memories.reserve(pop.persons.size());
  for (const auto& person : pop.persons) {
    const Household& hh = pop.household(person.household_id);
    const auto& anchor = anchors.at(hh.household_id);
    Rng rng = Rng::derive(cfg.seed, kStreamPlan, static_cast<std::uint64_t>(person.person_id));
    auto chain = activitygen::assign_activity_chain(person, s.chains, rng);
    DailyPlan plan = activitygen::build_initial_plan(person, chain, s.od, s.facilities,
                                                     s.time_models, anchor, hh.cars,
                                                     cfg.plangen, rng);

    mobsim::AgentInput in;
    in.person_id = person.person_id;
    in.household_cars = hh.cars;
    in.act_x.reserve(plan.activities.size());
    in.act_y.reserve(plan.activities.size());
    in.act_link.reserve(plan.activities.size());
    for (const auto& act : plan.activities) {
      if (act.type == ActivityType::Home) {
        in.act_x.push_back(anchor.x);
        in.act_y.push_back(anchor.y);
        in.act_link.push_back(s.net.nearest_link(anchor.x, anchor.y));
      } else {
        const auto& f = s.facilities.by_id(act.facility_id);
        in.act_x.push_back(f.x);
        in.act_y.push_back(f.y);
        in.act_link.push_back(fac_link.at(f.facility_id));
      }
    }
    setup.inputs.push_back(std::move(in));
    setup.memories.emplace_back(std::move(plan), cfg.replanning.max_plans);

    setup.factors.push_back(taste_factors(person, hh.income_eur, s.taste));
    PlanScoringContext ctx;
    ctx.spc = person.spc;
    ctx.household_cars = hh.cars;
    const auto* facilities = &s.facilities;
    const ScenarioConfig* cfg_ptr = &cfg;
    ctx.parking_at = [facilities, cfg_ptr](Id facility_id) {
      if (facility_id < 0) return cfg_ptr->parking_default;
      return parking_of_zone(*cfg_ptr, facilities->by_id(facility_id).zone_id);
    };
    setup.contexts.push_back(std::move(ctx));
  }

  for (std::size_t i = 0; i < setup.inputs.size(); ++i)
    plan_rows.emplace_back(setup.inputs[i].person_id, &setup.memories[i].selected());
  activitygen::write_plans_csv(out_dir / "plans_initial.csv", plan_rows);
  return setup;
}

void write_manifest(const std::filesystem::path& path, const ScenarioConfig& cfg,
                    const ScenarioResult& result) {
  nlohmann::json j;
  j["tool"] = "rtsim";
  j["version"] = kVersion;
  j["seed"] = cfg.seed;
  j["config_hash"] = cfg.config_hash();
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["persons"] = result.persons;
  j["households"] = result.households;
  j["fleet_size"] = cfg.fleet_cfg.fleet_size;
  j["taste_factors_enabled"] = cfg.taste.enabled;
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
}

}  // namespace

ScenarioResult run_scenario(ScenarioConfig cfg) {
  cfg.validate_files();
  if (cfg.output_dir.empty()) throw ConfigError("config: run.output_dir (or --out) required");
  const auto& out_dir = cfg.output_dir;
  std::filesystem::create_directories(out_dir);
  std::filesystem::create_directories(out_dir / "charts");

  LoadedScenario s = load_scenario(cfg);
  if (s.synthesized) {
    s.pop.write_csv(out_dir / "population_households.csv",
                    out_dir / "population_persons.csv");
    auto controls = synthpop::default_controls();
    auto targets = synthpop::load_zone_targets_csv(*cfg.paths.zone_targets, controls);
    synthpop::write_validation_csv(out_dir / "synthesis_report.csv",
                                   synthpop::validate_population(s.pop, targets, controls));
  }

  AgentSetup setup = build_agents(cfg, s, out_dir);
  const std::size_t n_agents = setup.inputs.size();

  const int innovation_stop = static_cast<int>(
      std::floor(cfg.replanning.innovation_stop_fraction * cfg.max_iterations));
  replanning::StrategyWeights weights{cfg.replanning.w_select, cfg.replanning.w_mode_mutation,
                                      cfg.replanning.w_time_mutation, innovation_stop};
  weights.validate();

  replanning::ConvergenceMonitor monitor(cfg.convergence.window, cfg.convergence.epsilon);
  TravelTimeField ttf(s.net, cfg.tt_bin_sec);

  csv::Writer iter_csv(out_dir / "iteration_scores.csv");
  iter_csv.field(std::string("iteration"))
      .field("meanExecuted")
      .field("meanBest")
      .field("meanWorst");
  iter_csv.end_row();

  mobsim::DayResult last_day;
  fleet::FleetState last_fleet;
  ScenarioResult result;
  result.out_dir = out_dir;
  result.persons = s.pop.persons.size();
  result.households = s.pop.households.size();

  for (int it = 0; it < cfg.max_iterations; ++it) {
    for (std::size_t i = 0; i < n_agents; ++i)
      setup.inputs[i].plan = &setup.memories[i].selected();

    fleet::FleetState fstate;
    fleet::FleetState* fleet_ptr = nullptr;
    if (cfg.fleet_cfg.enabled()) {
      fstate = fleet::FleetState(cfg.fleet_cfg, s.net);
      fleet_ptr = &fstate;
    }
    mobsim::DayResult day = mobsim::run_day(setup.inputs, s.net, ttf, fleet_ptr,
                                            cfg.mobsim_cfg);

    const bool frozen =
        it >= innovation_stop && !cfg.replanning.refresh_after_innovation_stop;
    double sum_exec = 0.0, sum_best = 0.0, sum_worst = 0.0;
    for (std::size_t i = 0; i < n_agents; ++i) {
      const double exec = score_plan(*setup.inputs[i].plan, s.scoring, s.act_scoring,
                                     setup.factors[i], setup.contexts[i]);
      if (!frozen || !setup.memories[i].selected().score)
        setup.memories[i].record_executed_score(exec, cfg.replanning.score_smoothing);
      sum_exec += exec;
      sum_best += setup.memories[i].best_score();
      sum_worst += setup.memories[i].worst_score();
    }
    const double mean_exec = sum_exec / static_cast<double>(n_agents);
    monitor.append(mean_exec);
    iter_csv.field(static_cast<std::int64_t>(it))
        .field(mean_exec)
        .field(sum_best / static_cast<double>(n_agents))
        .field(sum_worst / static_cast<double>(n_agents));
    iter_csv.end_row();

    last_day = std::move(day);
    if (cfg.fleet_cfg.enabled()) last_fleet = std::move(fstate);
    result.iterations = it + 1;

    if (monitor.has_converged()) {
      result.converged = true;
      break;
    }
    ttf.update(last_day.observations, cfg.tt_smoothing);
    if (it + 1 < cfg.max_iterations) {
      for (std::size_t i = 0; i < n_agents; ++i) {
        Rng rng = Rng::derive(cfg.seed, kStreamReplan,
                              static_cast<std::uint64_t>(setup.inputs[i].person_id),
                              static_cast<std::uint64_t>(it + 1));
        replanning::ModeAvailability avail;
        avail.car = setup.inputs[i].household_cars >= 1;
        avail.robotaxi = cfg.fleet_cfg.enabled();
        replanning::evolve_agent(setup.memories[i], weights, it + 1,
                                 cfg.replanning.beta_select, avail,
                                 cfg.replanning.time_mutation_sigma_sec, rng);
      }
    }
  }
  iter_csv.close();

  // final-day artifacts and KPIs
  last_day.log.write_csv(out_dir / "events.csv");
  const fleet::FleetState* fleet_ptr =
      cfg.fleet_cfg.enabled() ? &last_fleet : nullptr;
  if (fleet_ptr) {
    last_fleet.write_tasks_csv(out_dir / "fleet_tasks.csv", s.net);
    last_fleet.write_requests_csv(out_dir / "requests.csv");
  }
  result.kpis = metrics::compute_kpis(last_day.log, fleet_ptr, s.pop, last_day.sim_end_sec,
                                      cfg.in_service_occupied_only);
  result.kpis.iterations = result.iterations;
  result.kpis.converged = result.converged;
  if (!monitor.history().empty()) result.kpis.mean_executed_score = monitor.history().back();

  metrics::write_modal_split_csv(out_dir / "modal_split.csv", result.kpis.modal_shares);
  metrics::write_waiting_csv(out_dir / "waiting_times.csv", result.kpis.waiting);
  metrics::write_usage_by_spc_csv(out_dir / "usage_by_spc.csv", result.kpis.rt_users_by_spc);
  metrics::write_in_service_hourly_csv(
      out_dir / "in_service_hourly.csv",
      {{cfg.fleet_cfg.fleet_size, result.kpis.hourly_in_service}});

  {
    std::vector<svg::BarGroup> groups;
    for (Mode m : kAllModes) {
      auto it2 = result.kpis.modal_shares.find(m);
      groups.push_back({to_string(m), {it2 == result.kpis.modal_shares.end() ? 0.0
                                                                             : it2->second}});
    }
    svg::write_grouped_bars(out_dir / "charts" / "modal_split.svg", "Modal split",
                            {"share"}, groups);
    if (cfg.fleet_cfg.enabled())
      svg::write_heatmap(out_dir / "charts" / "in_service_hourly.svg",
                         "Hourly in-service rate",
                         {std::to_string(cfg.fleet_cfg.fleet_size)},
                         {result.kpis.hourly_in_service});
  }

  write_manifest(out_dir / "manifest.json", cfg, result);
  return result;
}

ScenarioResult run_scenario_file(const std::filesystem::path& config_path,
                                 const RunOverrides& overrides) {
  ScenarioConfig cfg = ScenarioConfig::load(config_path);
  if (overrides.out_dir) cfg.output_dir = *overrides.out_dir;
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.threads) cfg.threads = *overrides.threads;
  if (overrides.fleet_size) cfg.fleet_cfg.fleet_size = *overrides.fleet_size;
  if (overrides.taste_enabled) cfg.taste.enabled = *overrides.taste_enabled;
  return run_scenario(std::move(cfg));
}

void run_synthesis(const ScenarioConfig& cfg) {
  if (!cfg.paths.microdata_households || !cfg.paths.microdata_persons ||
      !cfg.paths.zone_targets)
    throw ConfigError("config: synthesize requires paths.microdata_* and paths.zone_targets");
  if (cfg.output_dir.empty()) throw ConfigError("config: run.output_dir (or --out) required");
  std::filesystem::create_directories(cfg.output_dir);
  Population sample = Population::load_csv(*cfg.paths.microdata_households,
                                           *cfg.paths.microdata_persons);
  auto controls = synthpop::default_controls();
  auto targets = synthpop::load_zone_targets_csv(*cfg.paths.zone_targets, controls);
  auto res = synthpop::synthesize_population(sample, targets, controls, cfg.seed);
  res.population.write_csv(cfg.output_dir / "population_households.csv",
                           cfg.output_dir / "population_persons.csv");
  synthpop::write_validation_csv(
      cfg.output_dir / "synthesis_report.csv",
      synthpop::validate_population(res.population, targets, controls));
}

SweepResult run_sweep(const std::filesystem::path& config_path,
                      const std::vector<int>& fleet_sizes, TasteMode taste,
                      const RunOverrides& overrides) {
  if (fleet_sizes.empty()) throw ConfigError("sweep: fleet size list is empty");
  for (std::size_t i = 0; i < fleet_sizes.size(); ++i) {
    if (fleet_sizes[i] <= 0) throw ConfigError("sweep: fleet sizes must be positive");
    if (i > 0 && fleet_sizes[i] <= fleet_sizes[i - 1])
      throw ConfigError("sweep: fleet sizes must be strictly increasing");
  }
  ScenarioConfig base = ScenarioConfig::load(config_path);
  if (overrides.out_dir) base.output_dir = *overrides.out_dir;
  if (overrides.seed) base.seed = *overrides.seed;
  if (overrides.threads) base.threads = *overrides.threads;
  if (base.output_dir.empty()) throw ConfigError("config: run.output_dir (or --out) required");

  std::vector<bool> toggles;
  if (taste == TasteMode::on || taste == TasteMode::both) toggles.push_back(true);
  if (taste == TasteMode::off || taste == TasteMode::both) toggles.push_back(false);

  SweepResult sweep;
  sweep.out_dir = base.output_dir;
  for (bool on : toggles)
    for (int size : fleet_sizes) {
      SweepCell cell;
      cell.fleet_size = size;
      cell.taste_on = on;
      sweep.cells.push_back(cell);
    }

  // a failed cell cancels the rest of its toggle
  std::array<std::atomic<bool>, 2> toggle_failed{false, false};

  auto run_cell = [&](SweepCell& cell) {
    if (toggle_failed[cell.taste_on ? 1 : 0]) {
      cell.error = "skipped: earlier cell of this toggle failed";
      return;
    }
    ScenarioConfig cfg = base;
    cfg.fleet_cfg.fleet_size = cell.fleet_size;
    cfg.taste.enabled = cell.taste_on;
    cfg.output_dir = base.output_dir / "sweep" /
                     ("fleet_" + std::to_string(cell.fleet_size) + "_taste_" +
                      (cell.taste_on ? "on" : "off"));
    try {
      cell.result = run_scenario(std::move(cfg));
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
      toggle_failed[cell.taste_on ? 1 : 0] = true;
    }
  };

  const int threads = std::max(1, base.threads);
  if (threads <= 1) {
    for (auto& cell : sweep.cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= sweep.cells.size()) return;
          run_cell(sweep.cells[i]);
        }
      });
    for (auto& th : pool) th.join();
  }

  // summary
  std::filesystem::create_directories(sweep.out_dir);
  csv::Writer sw(sweep.out_dir / "sweep_summary.csv");
  sw.field(std::string("fleetSize"))
      .field("taste")
      .field("status")
      .field("rtShare")
      .field("meanWaitSec")
      .field("served")
      .field("rejected")
      .field("onboardKmPerVehicle")
      .field("peakMorningRate")
      .field("peakEveningRate")
      .field("offPeakRate")
      .field("iterations")
      .field("converged");
  sw.end_row();
  for (const auto& cell : sweep.cells) {
    sw.field(static_cast<std::int64_t>(cell.fleet_size))
        .field(cell.taste_on ? "on" : "off")
        .field(cell.ok ? "ok" : (cell.error.empty() ? "failed" : cell.error));
    if (cell.ok) {
      const auto& k = cell.result.kpis;
      auto rt = k.modal_shares.find(Mode::robotaxi);
      sw.field(rt == k.modal_shares.end() ? 0.0 : rt->second)
          .field(k.waiting.mean_sec)
          .field(static_cast<std::int64_t>(k.waiting.served))
          .field(static_cast<std::int64_t>(k.waiting.rejected))
          .field(k.onboard_km_per_vehicle)
          .field(k.peak_morning_rate)
          .field(k.peak_evening_rate)
          .field(k.off_peak_rate)
          .field(static_cast<std::int64_t>(cell.result.iterations))
          .field(cell.result.converged ? "true" : "false");
    } else {
      for (int i = 0; i < 10; ++i) sw.blank();
    }
    sw.end_row();
  }
  sw.close();

  // per-toggle hourly matrices plus Fig-style charts
  for (bool on : toggles) {
    std::vector<std::pair<int, std::vector<double>>> rows;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> heat;
    std::vector<svg::BarGroup> groups;
    for (const auto& cell : sweep.cells) {
      if (cell.taste_on != on || !cell.ok) continue;
      rows.emplace_back(cell.fleet_size, cell.result.kpis.hourly_in_service);
      labels.push_back(std::to_string(cell.fleet_size));
      heat.push_back(cell.result.kpis.hourly_in_service);
      svg::BarGroup g;
      g.label = std::to_string(cell.fleet_size);
      for (Mode m : kAllModes) {
        auto it = cell.result.kpis.modal_shares.find(m);
        g.values.push_back(it == cell.result.kpis.modal_shares.end() ? 0.0 : it->second);
      }
      groups.push_back(std::move(g));
    }
    const std::string suffix = on ? "on" : "off";
    if (!rows.empty()) {
      metrics::write_in_service_hourly_csv(
          sweep.out_dir / ("in_service_hourly_taste_" + suffix + ".csv"), rows);
      std::reverse(labels.begin(), labels.end());
      std::reverse(heat.begin(), heat.end());
      svg::write_heatmap(sweep.out_dir / ("in_service_heatmap_taste_" + suffix + ".svg"),
                         "Hourly in-service rate, taste " + suffix, labels, heat);
      std::vector<std::string> series;
      for (Mode m : kAllModes) series.push_back(to_string(m));
      svg::write_grouped_bars(sweep.out_dir / ("modal_split_taste_" + suffix + ".svg"),
                              "Modal split by fleet size, taste " + suffix, series, groups);
    }
  }

  // comparison tables per size when both toggles ran
  if (taste == TasteMode::both) {
    for (int size : fleet_sizes) {
      const SweepCell* a = nullptr;
      const SweepCell* b = nullptr;
      for (const auto& cell : sweep.cells) {
        if (cell.fleet_size != size || !cell.ok) continue;
        (cell.taste_on ? a : b) = &cell;
      }
      if (a && b) {
        auto rows = metrics::comparison_report(a->result.kpis, b->result.kpis);
        metrics::write_comparison_csv(
            sweep.out_dir / ("comparison_fleet_" + std::to_string(size) + ".csv"), rows);
      }
    }
  }
  return sweep;
}

}  // namespace rtsim::scenario
