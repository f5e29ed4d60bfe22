#include "rtsim/demo.hpp"

#include <algorithm>
#include <cmath>

#include "rtsim/csv.hpp"
#include "rtsim/network.hpp"
#include "rtsim/rng.hpp"

namespace rtsim::demo {

namespace {

constexpr double kLinkLen = 500.0;
constexpr double kFreespeed = 13.89;  // 50 km/h
constexpr double kFlowCap = 600.0;    // veh/h/lane

struct MemberTemplate {
  Spc spc;
  int age_lo, age_hi;
  double p_female;
};

struct HouseholdTemplate {
  double weight;
  double income_mean;
  double p_car0, p_car1;  // p_car2 = rest
  std::vector<MemberTemplate> members;
};

// Demographic archetypes; the mix puts most persons into Employed, with
// retired households skewed old and female, homemaker households female,
// and under-14 children in family households.
const std::vector<HouseholdTemplate>& household_templates() {
  static const std::vector<HouseholdTemplate> t = {
      // two employed adults, one or two children
      {0.22, 30000, 0.10, 0.55, {{Spc::Employed, 28, 55, 0.5},
                                 {Spc::Employed, 28, 55, 0.5},
                                 {Spc::Under14, 1, 13, 0.5},
                                 {Spc::Under14, 1, 13, 0.5}}},
      // employed + homemaker + child
      {0.10, 29500, 0.15, 0.65, {{Spc::Employed, 30, 58, 0.4},
                                 {Spc::Homemaker, 30, 58, 0.98},
                                 {Spc::Under14, 1, 13, 0.5}}},
      // single employed
      {0.16, 26000, 0.35, 0.60, {{Spc::Employed, 25, 60, 0.5}}},
      // employed couple, student teen
      {0.12, 30500, 0.10, 0.55, {{Spc::Employed, 40, 60, 0.5},
                                 {Spc::Employed, 40, 60, 0.5},
                                 {Spc::Student14Plus, 14, 22, 0.45}}},
      // retired couple
      {0.14, 25500, 0.30, 0.60, {{Spc::Retired, 62, 85, 0.5},
                                 {Spc::Retired, 62, 85, 0.5}}},
      // single retired, mostly women
      {0.09, 23000, 0.55, 0.42, {{Spc::Retired, 65, 90, 0.75}}},
      // student flat
      {0.07, 29500, 0.75, 0.23, {{Spc::Student14Plus, 18, 25, 0.45},
                                 {Spc::Student14Plus, 18, 25, 0.45}}},
      // unemployed single
      {0.06, 22500, 0.55, 0.40, {{Spc::Unemployed, 22, 58, 0.5}}},
      // unemployed couple with child
      {0.04, 23500, 0.35, 0.50, {{Spc::Unemployed, 25, 50, 0.5},
                                 {Spc::Unemployed, 25, 50, 0.5},
                                 {Spc::Under14, 1, 13, 0.5}}},
  };
  return t;
}

Household draw_household(Rng& rng, Id hh_id, Id& next_person, Population& pop) {
  const auto& templates = household_templates();
  std::vector<double> weights;
  for (const auto& t : templates) weights.push_back(t.weight);
  const HouseholdTemplate& tpl = templates[rng.categorical(weights)];

  Household hh;
  hh.household_id = hh_id;
  hh.zone_id = -1;
  hh.income_eur = std::max(8000.0, tpl.income_mean * (0.65 + 0.7 * rng.uniform01()));
  const double u = rng.uniform01();
  hh.cars = u < tpl.p_car0 ? 0 : (u < tpl.p_car0 + tpl.p_car1 ? 1 : 2);
  for (const auto& m : tpl.members) {
    Person p;
    p.person_id = next_person++;
    p.household_id = hh_id;
    p.age = m.age_lo + static_cast<int>(rng.uniform_int(m.age_hi - m.age_lo + 1));
    p.sex = rng.uniform01() < m.p_female ? Sex::female : Sex::male;
    p.spc = m.spc;
    hh.member_ids.push_back(p.person_id);
    pop.persons.push_back(p);
  }
  return hh;
}

struct ChainRow {
  const char* chain;
  double freq;
};

void add_chains(activitygen::ChainFrequencyTable& table, Spc spc,
                std::initializer_list<ChainRow> rows) {
  auto& out = table.rows[static_cast<int>(spc)];
  for (const auto& r : rows)
    out.emplace_back(activitygen::chain_from_string(r.chain), r.freq);
}

activitygen::ChainFrequencyTable demo_chains() {
  activitygen::ChainFrequencyTable t;
  add_chains(t, Spc::Employed,
             {{"H-W-H", 0.42}, {"H-W-C-H", 0.10}, {"H-W-L-H", 0.08}, {"H-W-H-C-H", 0.06},
              {"H", 0.08}, {"H-C-H", 0.07}, {"H-W-E-H", 0.05}, {"H-E-H", 0.04},
              {"H-L-H", 0.04}, {"H-W-H-L-H", 0.03}, {"H-O-H", 0.03}});
  add_chains(t, Spc::Unemployed,
             {{"H", 0.25}, {"H-C-H", 0.20}, {"H-E-H", 0.15}, {"H-L-H", 0.15},
              {"H-O-H", 0.10}, {"H-C-L-H", 0.08}, {"H-W-H", 0.07}});
  add_chains(t, Spc::Retired,
             {{"H", 0.25}, {"H-C-H", 0.25}, {"H-E-H", 0.15}, {"H-L-H", 0.15},
              {"H-C-L-H", 0.08}, {"H-E-C-H", 0.07}, {"H-X-H", 0.05}});
  add_chains(t, Spc::Student14Plus,
             {{"H-S-H", 0.50}, {"H-S-L-H", 0.15}, {"H-S-C-H", 0.08}, {"H", 0.12},
              {"H-L-H", 0.08}, {"H-C-H", 0.07}});
  add_chains(t, Spc::Under14,
             {{"H-S-H", 0.55}, {"H-S-L-H", 0.12}, {"H-S-H-L-H", 0.08}, {"H", 0.15},
              {"H-L-H", 0.10}});
  add_chains(t, Spc::Homemaker,
             {{"H-X-H", 0.20}, {"H-C-H", 0.25}, {"H-E-H", 0.18}, {"H", 0.15},
              {"H-C-E-H", 0.10}, {"H-L-H", 0.07}, {"H-X-C-H", 0.05}});
  t.validate();
  return t;
}

void add_bins(activitygen::EmpiricalDistribution& d,
              std::initializer_list<std::array<double, 3>> bins) {
  for (const auto& b : bins)
    d.bins.push_back({static_cast<std::int64_t>(b[0] * 3600),
                      static_cast<std::int64_t>(b[1] * 3600), b[2]});
}

// Start times bimodal around the morning and late-day peaks; durations with
// short-stay peaks and decaying tails.
activitygen::TimeModels demo_time_models() {
  using activitygen::TimeModelKind;
  activitygen::TimeModels t;

  auto st = [&t](ActivityType a) -> activitygen::EmpiricalDistribution& {
    return t.at(a, TimeModelKind::startTime);
  };
  auto du = [&t](ActivityType a) -> activitygen::EmpiricalDistribution& {
    return t.at(a, TimeModelKind::duration);
  };

  add_bins(st(ActivityType::Work), {{5.5, 6.5, 1.0},
                                    {6.5, 7.5, 4.0},
                                    {7.5, 8.5, 6.0},
                                    {8.5, 9.5, 4.0},
                                    {9.5, 11.0, 1.0},
                                    {12.0, 13.0, 2.0},
                                    {13.0, 14.5, 1.5},
                                    {15.0, 17.0, 0.5}});
  add_bins(du(ActivityType::Work), {{3.0, 4.5, 2.0}, {6.5, 7.5, 3.0}, {7.5, 9.0, 5.0}});

  add_bins(st(ActivityType::Study), {{7.25, 8.0, 5.0},
                                     {8.0, 8.75, 6.0},
                                     {8.75, 9.5, 1.5},
                                     {13.0, 14.0, 1.0}});
  add_bins(du(ActivityType::Study), {{3.0, 4.0, 2.0}, {5.5, 7.0, 4.0}, {7.0, 8.0, 1.5}});

  add_bins(st(ActivityType::OtherWork), {{7.0, 9.0, 2.0},
                                         {9.0, 12.0, 2.5},
                                         {13.0, 16.0, 2.5},
                                         {16.0, 18.0, 1.5}});
  add_bins(du(ActivityType::OtherWork), {{0.5, 1.5, 3.0}, {1.5, 3.0, 2.0}, {3.0, 5.0, 1.0}});

  add_bins(st(ActivityType::Shopping), {{8.5, 10.5, 2.5},
                                        {10.5, 12.0, 1.5},
                                        {14.0, 16.5, 2.0},
                                        {16.5, 19.0, 3.0}});
  add_bins(du(ActivityType::Shopping),
           {{0.25, 0.75, 5.0}, {0.75, 1.25, 2.5}, {1.25, 2.0, 1.0}});

  add_bins(st(ActivityType::Errands), {{8.0, 10.0, 3.0},
                                       {10.0, 12.0, 2.0},
                                       {13.5, 16.0, 2.0},
                                       {16.0, 18.0, 1.5}});
  add_bins(du(ActivityType::Errands), {{0.2, 0.6, 5.0}, {0.6, 1.2, 2.0}, {1.2, 2.0, 0.8}});

  add_bins(st(ActivityType::LeisureVisit), {{11.5, 13.5, 2.5},
                                            {16.0, 18.5, 3.0},
                                            {18.5, 20.5, 2.0}});
  add_bins(du(ActivityType::LeisureVisit), {{1.0, 2.0, 3.0}, {2.0, 3.0, 1.5}});

  add_bins(st(ActivityType::Escort), {{7.75, 8.75, 4.0}, {16.0, 17.0, 3.0}});
  add_bins(du(ActivityType::Escort), {{0.15, 0.3, 4.0}, {0.3, 0.6, 1.5}});

  // Home: start peaks track returns; durations decay gently
  add_bins(st(ActivityType::Home), {{6.0, 9.0, 1.0},
                                    {11.5, 13.5, 2.0},
                                    {16.0, 19.5, 4.0},
                                    {19.5, 22.0, 2.0}});
  add_bins(du(ActivityType::Home), {{0.5, 1.5, 3.0}, {1.5, 3.0, 2.0}, {3.0, 5.0, 1.2}});

  return t;
}

}  // namespace

ScenarioConfig generate_demo_scenario(const DemoParams& params) {
  if (params.grid_n < 2) throw ConfigError("demo: grid_n must be >= 2");
  if (params.zones_per_side < 1) throw ConfigError("demo: zones_per_side must be >= 1");
  const auto& dir = params.out_dir;
  std::filesystem::create_directories(dir);

  // ---- network: grid_n x grid_n Manhattan grid, 500 m links ----
  Network net;
  const int n = params.grid_n;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      net.nodes.push_back({static_cast<Id>(r * n + c + 1), c * kLinkLen, r * kLinkLen});
  Id link_id = 1;
  auto add_link = [&](int from_r, int from_c, int to_r, int to_c) {
    Link l;
    l.link_id = link_id++;
    l.from_node = from_r * n + from_c + 1;
    l.to_node = to_r * n + to_c + 1;
    l.length_m = kLinkLen;
    l.freespeed_mps = kFreespeed;
    l.flow_capacity_veh_h = kFlowCap;
    l.lanes = 1.0;
    net.links.push_back(l);
  };
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (c + 1 < n) {
        add_link(r, c, r, c + 1);
        add_link(r, c + 1, r, c);
      }
      if (r + 1 < n) {
        add_link(r, c, r + 1, c);
        add_link(r + 1, c, r, c);
      }
    }
  net.build_index();
  net.write_csv(dir / "nodes.csv", dir / "links.csv");

  // ---- zones ----
  const int zps = params.zones_per_side;
  const double extent = (n - 1) * kLinkLen;
  const double zone_side = extent / zps;
  auto zone_centroid = [&](Id zone) {
    int zi = static_cast<int>(zone - 1);
    double cx = (zi % zps + 0.5) * zone_side;
    double cy = (zi / zps + 0.5) * zone_side;
    return std::pair<double, double>{cx, cy};
  };
  const int nzones = zps * zps;

  // ---- facilities ----
  activitygen::FacilitySet fs;
  Rng fac_rng = Rng::derive(params.seed, 0xFAC);
  Id fac_id = 1;
  const double cx_mid = extent / 2.0, cy_mid = extent / 2.0;
  for (Id zone = 1; zone <= nzones; ++zone) {
    auto [cx, cy] = zone_centroid(zone);
    const double dist_center = std::hypot(cx - cx_mid, cy - cy_mid);
    const double centrality = 1.0 - dist_center / (extent * 0.75 + 1.0);
    auto off = [&](double scale) {
      return (fac_rng.uniform01() - 0.5) * zone_side * scale;
    };
    auto add = [&](std::vector<ActivityType> types, double size, double spread) {
      activitygen::Facility f;
      f.facility_id = fac_id++;
      f.zone_id = zone;
      f.x = std::clamp(cx + off(spread), 0.0, extent);
      f.y = std::clamp(cy + off(spread), 0.0, extent);
      f.types = std::move(types);
      f.size = size;
      fs.facilities.push_back(std::move(f));
    };
    add({ActivityType::Home}, 1.0, 0.3);
    // central zones attract more work
    add({ActivityType::Work, ActivityType::OtherWork}, 1.0 + 6.0 * centrality, 0.6);
    add({ActivityType::Shopping, ActivityType::Errands, ActivityType::Escort},
        1.0 + 2.0 * centrality, 0.6);
    add({ActivityType::LeisureVisit}, 1.0 + 1.5 * centrality, 0.7);
    if (zone % 2 == 1)
      add({ActivityType::Study, ActivityType::Escort}, 2.0, 0.5);
  }
  fs.build_index();
  fs.write_csv(dir / "facilities.csv");

  // ---- microdata sample ----
  Population sample;
  Rng micro_rng = Rng::derive(params.seed, 0x514D);
  const int sample_households = std::max(120, params.persons_target / 60);
  Id next_person = 1;
  for (Id h = 1; h <= sample_households; ++h)
    sample.households.push_back(draw_household(micro_rng, h, next_person, sample));
  sample.rebuild_index();
  sample.write_csv(dir / "microdata_households.csv", dir / "microdata_persons.csv");

  // ---- zone targets from a reference draw that lands on persons_target ----
  auto controls = synthpop::default_controls();
  std::vector<synthpop::ZoneTargets> targets;
  Rng tgt_rng = Rng::derive(params.seed, 0x7A67);
  // smallest household size in the sample (used to land exactly on quota)
  std::vector<std::vector<std::size_t>> by_size(16);
  for (std::size_t i = 0; i < sample.households.size(); ++i) {
    std::size_t s = std::min<std::size_t>(sample.households[i].member_ids.size(), 15);
    by_size[s].push_back(i);
  }
  int remaining_total = params.persons_target;
  for (Id zone = 1; zone <= nzones; ++zone) {
    const int quota = remaining_total / static_cast<int>(nzones - zone + 1);
    remaining_total -= quota;
    std::vector<const Household*> hhs;
    std::vector<std::vector<const Person*>> members;
    int persons = 0;
    while (persons < quota) {
      const int remaining = quota - persons;
      // draw uniformly until the tail, then fill with fitting sizes
      std::size_t idx;
      const auto& hh_try = sample.households[tgt_rng.uniform_int(sample.households.size())];
      if (static_cast<int>(hh_try.member_ids.size()) <= remaining) {
        idx = static_cast<std::size_t>(&hh_try - sample.households.data());
      } else {
        std::size_t best_size = 0;
        for (std::size_t s = 1; s < by_size.size(); ++s)
          if (!by_size[s].empty() && static_cast<int>(s) <= remaining) best_size = s;
        if (best_size == 0)
          for (std::size_t s = 1; s < by_size.size(); ++s)
            if (!by_size[s].empty()) {
              best_size = s;
              break;
            }
        const auto& pool = by_size[best_size];
        idx = pool[tgt_rng.uniform_int(pool.size())];
      }
      const Household& hh = sample.households[idx];
      hhs.push_back(&hh);
      std::vector<const Person*> mem;
      for (Id pid : hh.member_ids) mem.push_back(&sample.person(pid));
      members.push_back(std::move(mem));
      persons += static_cast<int>(hh.member_ids.size());
    }
    synthpop::ZoneTargets zt;
    zt.zone_id = zone;
    zt.household_count = static_cast<int>(hhs.size());
    zt.targets = synthpop::count_bins(hhs, members, controls);
    targets.push_back(std::move(zt));
  }
  synthpop::write_zone_targets_csv(dir / "zone_targets.csv", targets, controls);

  // ---- chains, time models ----
  demo_chains().write_csv(dir / "chains.csv");
  demo_time_models().write_csv(dir / "time_models.csv");

  // ---- od model: gravity on zone centroids with facility attraction ----
  activitygen::OdModel od;
  const double theta_od = 2500.0;
  for (Id origin = 1; origin <= nzones; ++origin) {
    auto [ox, oy] = zone_centroid(origin);
    for (ActivityType t : kAllActivityTypes) {
      if (t == ActivityType::Home) continue;
      std::vector<std::pair<Id, double>> row;
      double total = 0.0;
      for (Id dest = 1; dest <= nzones; ++dest) {
        double attraction = 0.0;
        for (int fi : fs.eligible_in_zone(dest, t))
          attraction += fs.facilities[fi].size;
        if (attraction <= 0.0) continue;
        auto [dx, dy] = zone_centroid(dest);
        const double w = attraction * std::exp(-std::hypot(dx - ox, dy - oy) / theta_od);
        row.emplace_back(dest, w);
        total += w;
      }
      for (auto& [dest, w] : row) w /= total;
      od.rows[{origin, static_cast<int>(t)}] = std::move(row);
    }
  }
  od.write_csv(dir / "od_model.csv");

  // ---- scoring parameters ----
  // Estimated coefficients plus robotaxi rows. The under-14 car constant
  // reflects being chauffeured within the household and does not transfer to
  // an unattended service, so the demo calibrates that robotaxi constant to
  // a neutral negative value.
  ScoringParams sp = ScoringParams::defaults();
  sp.at(Spc::Under14, Mode::robotaxi).c = -2.0;
  sp.write_csv(dir / "scoring_params.csv");

  // ---- config ----
  ScenarioConfig cfg;
  cfg.seed = params.seed;
  cfg.max_iterations = params.max_iterations;
  cfg.output_dir = dir / "out";
  cfg.paths.nodes = dir / "nodes.csv";
  cfg.paths.links = dir / "links.csv";
  cfg.paths.facilities = dir / "facilities.csv";
  cfg.paths.chains = dir / "chains.csv";
  cfg.paths.od_model = dir / "od_model.csv";
  cfg.paths.time_models = dir / "time_models.csv";
  cfg.paths.scoring_params = dir / "scoring_params.csv";
  cfg.paths.microdata_households = dir / "microdata_households.csv";
  cfg.paths.microdata_persons = dir / "microdata_persons.csv";
  cfg.paths.zone_targets = dir / "zone_targets.csv";
  cfg.fleet_cfg.fleet_size = params.default_fleet_size;
  // four quadrant-centroid depots
  for (int qr = 0; qr < 2; ++qr)
    for (int qc = 0; qc < 2; ++qc) {
      const double qx = (qc + 0.5) * extent / 2.0;
      const double qy = (qr + 0.5) * extent / 2.0;
      cfg.fleet_cfg.depot_link_ids.push_back(
          net.links[net.nearest_link(qx, qy)].link_id);
    }
  // parking pressure rises toward the center: high core, medium ring
  for (Id zone = 1; zone <= nzones; ++zone) {
    auto [zx, zy] = zone_centroid(zone);
    const double d = std::hypot(zx - cx_mid, zy - cy_mid) / (extent / 2.0);
    if (d < 0.4)
      cfg.parking_zone_levels[zone] = ParkingLevel::high;
    else if (d < 0.8)
      cfg.parking_zone_levels[zone] = ParkingLevel::medium;
  }
  write_scenario_config_json(dir / "config.json", cfg);
  return cfg;
}

}  // namespace rtsim::demo
