#include "rtsim/config.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "rtsim/replanning.hpp"
#include "rtsim/rng.hpp"

namespace rtsim {

using nlohmann::json;

namespace {

const json* find(const json& root, const std::string& dotted) {
  const json* cur = &root;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = dotted.find('.', start);
    std::string key = dotted.substr(start, dot - start);
    if (!cur->is_object() || !cur->contains(key)) return nullptr;
    cur = &(*cur)[key];
    if (dot == std::string::npos) return cur;
    start = dot + 1;
  }
}

template <typename T>
T require(const json& root, const std::string& key) {
  const json* v = find(root, key);
  if (!v) throw ConfigError("config: missing key '" + key + "'");
  try {
    return v->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& root, const std::string& key, T fallback) {
  const json* v = find(root, key);
  if (!v || v->is_null()) return fallback;
  try {
    return v->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for key '" + key + "'");
  }
}

std::optional<std::filesystem::path> opt_path(const json& root, const std::string& key,
                                              const std::filesystem::path& base) {
  const json* v = find(root, key);
  if (!v || v->is_null()) return std::nullopt;
  if (!v->is_string()) throw ConfigError("config: bad value for key '" + key + "'");
  std::filesystem::path p = v->get<std::string>();
  return p.is_absolute() ? p : base / p;
}

std::filesystem::path req_path(const json& root, const std::string& key,
                               const std::filesystem::path& base) {
  auto p = opt_path(root, key, base);
  if (!p) throw ConfigError("config: missing key '" + key + "'");
  return *p;
}

ParkingLevel parking_from_string(const std::string& s, const std::string& key) {
  if (s == "low") return ParkingLevel::low;
  if (s == "medium") return ParkingLevel::medium;
  if (s == "high") return ParkingLevel::high;
  throw ConfigError("config: bad parking level '" + s + "' for key '" + key + "'");
}

const char* parking_name(ParkingLevel p) {
  switch (p) {
    case ParkingLevel::low: return "low";
    case ParkingLevel::medium: return "medium";
    default: return "high";
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("cannot open config file: " + config_path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + config_path.string() + ": " + e.what());
  }
  const std::filesystem::path base = config_path.parent_path();

  ScenarioConfig c;
  if (!find(root, "run.seed"))
    throw ConfigError("config: missing key 'run.seed' (an explicit seed is required)");
  c.seed = require<std::uint64_t>(root, "run.seed");
  c.max_iterations = get_or<int>(root, "run.max_iterations", c.max_iterations);
  if (c.max_iterations < 1) throw ConfigError("config: run.max_iterations must be >= 1");
  c.sample_fraction = get_or<double>(root, "run.sample_fraction", 1.0);
  if (c.sample_fraction <= 0.0 || c.sample_fraction > 1.0)
    throw ConfigError("config: run.sample_fraction must be in (0, 1]");
  if (auto p = opt_path(root, "run.output_dir", base)) c.output_dir = *p;
  c.threads = get_or<int>(root, "run.threads", 1);

  c.paths.nodes = req_path(root, "paths.nodes", base);
  c.paths.links = req_path(root, "paths.links", base);
  c.paths.facilities = req_path(root, "paths.facilities", base);
  c.paths.chains = req_path(root, "paths.chains", base);
  c.paths.od_model = req_path(root, "paths.od_model", base);
  c.paths.time_models = req_path(root, "paths.time_models", base);
  c.paths.scoring_params = opt_path(root, "paths.scoring_params", base);
  c.paths.microdata_households = opt_path(root, "paths.microdata_households", base);
  c.paths.microdata_persons = opt_path(root, "paths.microdata_persons", base);
  c.paths.zone_targets = opt_path(root, "paths.zone_targets", base);
  c.paths.population_households = opt_path(root, "paths.population_households", base);
  c.paths.population_persons = opt_path(root, "paths.population_persons", base);

  const bool have_micro = c.paths.microdata_households && c.paths.microdata_persons &&
                          c.paths.zone_targets;
  const bool have_pop = c.paths.population_households && c.paths.population_persons;
  if (!have_micro && !have_pop)
    throw ConfigError(
        "config: either paths.population_* or paths.microdata_* plus paths.zone_targets "
        "must be set");

  c.fleet_cfg.fleet_size = get_or<int>(root, "fleet.size", 0);
  if (c.fleet_cfg.fleet_size < 0) throw ConfigError("config: fleet.size must be >= 0");
  c.fleet_cfg.depot_link_ids = get_or<std::vector<Id>>(root, "fleet.depots", {});
  c.fleet_cfg.ingress_sec = get_or<std::int64_t>(root, "fleet.ingress_sec", 60);
  c.fleet_cfg.egress_sec = get_or<std::int64_t>(root, "fleet.egress_sec", 120);
  if (c.fleet_cfg.fleet_size > 0 && c.fleet_cfg.depot_link_ids.empty())
    throw ConfigError("config: fleet.depots must be set when fleet.size > 0");

  c.rt_c_offset = get_or<double>(root, "scoring.rt_c_offset", 0.0);

  c.taste.enabled = get_or<bool>(root, "taste_factors.enabled", true);
  c.taste.sex_male = get_or<double>(root, "taste_factors.sex.male", c.taste.sex_male);
  c.taste.sex_female = get_or<double>(root, "taste_factors.sex.female", c.taste.sex_female);
  c.taste.age_young_value =
      get_or<double>(root, "taste_factors.age.young_value", c.taste.age_young_value);
  c.taste.age_old_value =
      get_or<double>(root, "taste_factors.age.old_value", c.taste.age_old_value);
  c.taste.age_young_max =
      get_or<double>(root, "taste_factors.age.young_max", c.taste.age_young_max);
  c.taste.age_old_min = get_or<double>(root, "taste_factors.age.old_min", c.taste.age_old_min);
  if (c.taste.age_old_min <= c.taste.age_young_max)
    throw ConfigError("config: taste_factors.age.old_min must exceed age.young_max");
  c.taste.income_lambda =
      get_or<double>(root, "taste_factors.income.lambda", c.taste.income_lambda);
  c.taste.income_ref_eur =
      get_or<double>(root, "taste_factors.income.ref_eur", c.taste.income_ref_eur);
  c.taste.income_clip_lo =
      get_or<double>(root, "taste_factors.income.clip_lo", c.taste.income_clip_lo);
  c.taste.income_clip_hi =
      get_or<double>(root, "taste_factors.income.clip_hi", c.taste.income_clip_hi);
  if (c.taste.income_clip_lo <= 0.0 || c.taste.income_clip_hi < c.taste.income_clip_lo)
    throw ConfigError("config: taste_factors.income clip bounds must satisfy 0 < lo <= hi");

  c.replanning.max_plans = get_or<std::size_t>(root, "replanning.max_plans", 5);
  c.replanning.w_select = get_or<double>(root, "replanning.weights.select", 0.8);
  c.replanning.w_mode_mutation =
      get_or<double>(root, "replanning.weights.mode_mutation", 0.1);
  c.replanning.w_time_mutation =
      get_or<double>(root, "replanning.weights.time_mutation", 0.1);
  c.replanning.innovation_stop_fraction =
      get_or<double>(root, "replanning.innovation_stop_fraction", 0.8);
  c.replanning.beta_select = get_or<double>(root, "replanning.beta_select", 1.0);
  c.replanning.score_smoothing = get_or<double>(root, "replanning.score_smoothing", 0.5);
  c.replanning.time_mutation_sigma_sec =
      get_or<double>(root, "replanning.time_mutation_sigma_sec", 1800.0);
  c.replanning.refresh_after_innovation_stop =
      get_or<bool>(root, "replanning.refresh_after_innovation_stop", false);
  replanning::StrategyWeights w{c.replanning.w_select, c.replanning.w_mode_mutation,
                                c.replanning.w_time_mutation, -1};
  try {
    w.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: replanning.weights: ") + e.what());
  }

  c.convergence.window = get_or<int>(root, "convergence.window", 10);
  c.convergence.epsilon = get_or<double>(root, "convergence.epsilon", 1e-3);

  c.mobsim_cfg.stuck_sec = get_or<std::int64_t>(root, "mobsim.stuck_sec", 3600);
  c.mobsim_cfg.cell_length_m = get_or<double>(root, "mobsim.cell_length_m", 7.5);
  c.mobsim_cfg.walk_speed_kmh = get_or<double>(root, "mobsim.walk_speed_kmh", 5.0);
  c.mobsim_cfg.pt_speed_kmh = get_or<double>(root, "mobsim.pt_speed_kmh", 20.0);
  c.mobsim_cfg.flow_capacity_factor =
      get_or<double>(root, "mobsim.flow_capacity_factor", 1.0);
  c.mobsim_cfg.storage_capacity_factor =
      get_or<double>(root, "mobsim.storage_capacity_factor", 1.0);
  c.tt_bin_sec = get_or<int>(root, "mobsim.tt_bin_sec", 900);
  c.tt_smoothing = get_or<double>(root, "mobsim.tt_smoothing", 0.3);

  c.in_service_occupied_only =
      get_or<bool>(root, "metrics.in_service_occupied_only", false);

  c.parking_default = parking_from_string(
      get_or<std::string>(root, "parking.default_level", "low"), "parking.default_level");
  if (const json* zl = find(root, "parking.zone_levels"); zl && zl->is_object()) {
    for (auto it = zl->begin(); it != zl->end(); ++it)
      c.parking_zone_levels[std::stoll(it.key())] =
          parking_from_string(it.value().get<std::string>(), "parking.zone_levels");
  }

  c.plangen.gravity_theta_m = get_or<double>(root, "activitygen.gravity_theta_m", 2000.0);
  c.plangen.mode_seed.car = get_or<double>(root, "activitygen.mode_seed.car", 0.55);
  c.plangen.mode_seed.pt = get_or<double>(root, "activitygen.mode_seed.pt", 0.15);
  c.plangen.mode_seed.walk = get_or<double>(root, "activitygen.mode_seed.walk", 0.30);

  return c;
}

void ScenarioConfig::validate_files() const {
  auto check = [](const std::optional<std::filesystem::path>& p, const std::string& key) {
    if (p && !std::filesystem::exists(*p))
      throw ConfigError("config: file for key '" + key + "' does not exist: " + p->string());
  };
  auto check_req = [&check](const std::filesystem::path& p, const std::string& key) {
    check(std::optional{p}, key);
  };
  check_req(paths.nodes, "paths.nodes");
  check_req(paths.links, "paths.links");
  check_req(paths.facilities, "paths.facilities");
  check_req(paths.chains, "paths.chains");
  check_req(paths.od_model, "paths.od_model");
  check_req(paths.time_models, "paths.time_models");
  check(paths.scoring_params, "paths.scoring_params");
  check(paths.microdata_households, "paths.microdata_households");
  check(paths.microdata_persons, "paths.microdata_persons");
  check(paths.zone_targets, "paths.zone_targets");
  check(paths.population_households, "paths.population_households");
  check(paths.population_persons, "paths.population_persons");
}

std::string ScenarioConfig::canonical_text() const {
  json j;
  j["run"] = {{"seed", seed},
              {"max_iterations", max_iterations},
              {"sample_fraction", sample_fraction},
              {"threads", threads}};
  j["paths"] = {{"nodes", paths.nodes.string()},
                {"links", paths.links.string()},
                {"facilities", paths.facilities.string()},
                {"chains", paths.chains.string()},
                {"od_model", paths.od_model.string()},
                {"time_models", paths.time_models.string()}};
  if (paths.scoring_params) j["paths"]["scoring_params"] = paths.scoring_params->string();
  if (paths.microdata_households)
    j["paths"]["microdata_households"] = paths.microdata_households->string();
  if (paths.population_households)
    j["paths"]["population_households"] = paths.population_households->string();
  j["fleet"] = {{"size", fleet_cfg.fleet_size},
                {"depots", fleet_cfg.depot_link_ids},
                {"ingress_sec", fleet_cfg.ingress_sec},
                {"egress_sec", fleet_cfg.egress_sec}};
  j["scoring"] = {{"rt_c_offset", rt_c_offset}};
  j["taste_factors"] = {{"enabled", taste.enabled},
                        {"sex_male", taste.sex_male},
                        {"sex_female", taste.sex_female},
                        {"age_young_value", taste.age_young_value},
                        {"age_old_value", taste.age_old_value},
                        {"age_young_max", taste.age_young_max},
                        {"age_old_min", taste.age_old_min},
                        {"income_lambda", taste.income_lambda},
                        {"income_ref_eur", taste.income_ref_eur},
                        {"income_clip_lo", taste.income_clip_lo},
                        {"income_clip_hi", taste.income_clip_hi}};
  j["replanning"] = {{"max_plans", replanning.max_plans},
                     {"w_select", replanning.w_select},
                     {"w_mode", replanning.w_mode_mutation},
                     {"w_time", replanning.w_time_mutation},
                     {"innovation_stop_fraction", replanning.innovation_stop_fraction},
                     {"beta_select", replanning.beta_select},
                     {"score_smoothing", replanning.score_smoothing},
                     {"sigma_sec", replanning.time_mutation_sigma_sec},
                     {"refresh_after_innovation_stop",
                      replanning.refresh_after_innovation_stop}};
  j["convergence"] = {{"window", convergence.window}, {"epsilon", convergence.epsilon}};
  j["mobsim"] = {{"stuck_sec", mobsim_cfg.stuck_sec},
                 {"cell_length_m", mobsim_cfg.cell_length_m},
                 {"walk_speed_kmh", mobsim_cfg.walk_speed_kmh},
                 {"pt_speed_kmh", mobsim_cfg.pt_speed_kmh},
                 {"flow_capacity_factor", mobsim_cfg.flow_capacity_factor},
                 {"storage_capacity_factor", mobsim_cfg.storage_capacity_factor},
                 {"tt_bin_sec", tt_bin_sec},
                 {"tt_smoothing", tt_smoothing}};
  j["metrics"] = {{"in_service_occupied_only", in_service_occupied_only}};
  json zl = json::object();
  for (const auto& [zone, level] : parking_zone_levels)
    zl[std::to_string(zone)] = parking_name(level);
  j["parking"] = {{"default_level", parking_name(parking_default)}, {"zone_levels", zl}};
  j["activitygen"] = {{"gravity_theta_m", plangen.gravity_theta_m},
                      {"mode_seed_car", plangen.mode_seed.car},
                      {"mode_seed_pt", plangen.mode_seed.pt},
                      {"mode_seed_walk", plangen.mode_seed.walk}};
  return j.dump();
}

std::uint64_t ScenarioConfig::config_hash() const {
  const std::string text = canonical_text();
  return fnv1a64(std::span<const char>(text.data(), text.size()));
}

void write_scenario_config_json(const std::filesystem::path& path,
                                const ScenarioConfig& cfg) {
  json j;
  j["run"] = {{"seed", cfg.seed},
              {"max_iterations", cfg.max_iterations},
              {"sample_fraction", cfg.sample_fraction},
              {"output_dir", cfg.output_dir.string()},
              {"threads", cfg.threads}};
  j["paths"] = {{"nodes", cfg.paths.nodes.string()},
                {"links", cfg.paths.links.string()},
                {"facilities", cfg.paths.facilities.string()},
                {"chains", cfg.paths.chains.string()},
                {"od_model", cfg.paths.od_model.string()},
                {"time_models", cfg.paths.time_models.string()}};
  if (cfg.paths.scoring_params)
    j["paths"]["scoring_params"] = cfg.paths.scoring_params->string();
  if (cfg.paths.microdata_households)
    j["paths"]["microdata_households"] = cfg.paths.microdata_households->string();
  if (cfg.paths.microdata_persons)
    j["paths"]["microdata_persons"] = cfg.paths.microdata_persons->string();
  if (cfg.paths.zone_targets) j["paths"]["zone_targets"] = cfg.paths.zone_targets->string();
  if (cfg.paths.population_households)
    j["paths"]["population_households"] = cfg.paths.population_households->string();
  if (cfg.paths.population_persons)
    j["paths"]["population_persons"] = cfg.paths.population_persons->string();
  j["fleet"] = {{"size", cfg.fleet_cfg.fleet_size},
                {"depots", cfg.fleet_cfg.depot_link_ids},
                {"ingress_sec", cfg.fleet_cfg.ingress_sec},
                {"egress_sec", cfg.fleet_cfg.egress_sec}};
  j["scoring"] = {{"rt_c_offset", cfg.rt_c_offset}};
  j["taste_factors"] = {
      {"enabled", cfg.taste.enabled},
      {"sex", {{"male", cfg.taste.sex_male}, {"female", cfg.taste.sex_female}}},
      {"age",
       {{"young_value", cfg.taste.age_young_value},
        {"old_value", cfg.taste.age_old_value},
        {"young_max", cfg.taste.age_young_max},
        {"old_min", cfg.taste.age_old_min}}},
      {"income",
       {{"lambda", cfg.taste.income_lambda},
        {"ref_eur", cfg.taste.income_ref_eur},
        {"clip_lo", cfg.taste.income_clip_lo},
        {"clip_hi", cfg.taste.income_clip_hi}}}};
  j["replanning"] = {
      {"max_plans", cfg.replanning.max_plans},
      {"weights",
       {{"select", cfg.replanning.w_select},
        {"mode_mutation", cfg.replanning.w_mode_mutation},
        {"time_mutation", cfg.replanning.w_time_mutation}}},
      {"innovation_stop_fraction", cfg.replanning.innovation_stop_fraction},
      {"beta_select", cfg.replanning.beta_select},
      {"score_smoothing", cfg.replanning.score_smoothing},
      {"time_mutation_sigma_sec", cfg.replanning.time_mutation_sigma_sec},
      {"refresh_after_innovation_stop", cfg.replanning.refresh_after_innovation_stop}};
  j["convergence"] = {{"window", cfg.convergence.window},
                      {"epsilon", cfg.convergence.epsilon}};
  j["mobsim"] = {{"stuck_sec", cfg.mobsim_cfg.stuck_sec},
                 {"cell_length_m", cfg.mobsim_cfg.cell_length_m},
                 {"walk_speed_kmh", cfg.mobsim_cfg.walk_speed_kmh},
                 {"pt_speed_kmh", cfg.mobsim_cfg.pt_speed_kmh},
                 {"flow_capacity_factor", cfg.mobsim_cfg.flow_capacity_factor},
                 {"storage_capacity_factor", cfg.mobsim_cfg.storage_capacity_factor},
                 {"tt_bin_sec", cfg.tt_bin_sec},
                 {"tt_smoothing", cfg.tt_smoothing}};
  j["metrics"] = {{"in_service_occupied_only", cfg.in_service_occupied_only}};
  json zl = json::object();
  for (const auto& [zone, level] : cfg.parking_zone_levels)
    zl[std::to_string(zone)] = parking_name(level);
  j["parking"] = {{"default_level", parking_name(cfg.parking_default)},
                  {"zone_levels", zl}};
  j["activitygen"] = {{"gravity_theta_m", cfg.plangen.gravity_theta_m},
                      {"mode_seed",
                       {{"car", cfg.plangen.mode_seed.car},
                        {"pt", cfg.plangen.mode_seed.pt},
                        {"walk", cfg.plangen.mode_seed.walk}}}};

  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config: " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace rtsim
