#include "rtsim/activitygen.hpp"

#include <algorithm>
#include <cmath>

#include "rtsim/csv.hpp"

namespace rtsim::activitygen {

std::string chain_to_string(const ActivityChain& chain) {
  std::string s;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) s += '-';
    s += activity_letter(chain[i]);
  }
  return s;
}

ActivityChain chain_from_string(const std::string& coded) {
  ActivityChain chain;
  for (const auto& part : csv::split(coded, '-')) {
    if (part.size() != 1) throw DataError("bad chain element '" + part + "' in '" + coded + "'");
    chain.push_back(activity_from_letter(part[0]));
  }
  if (chain.empty()) throw DataError("empty activity chain");
  if (chain.front() != ActivityType::Home || chain.back() != ActivityType::Home)
    throw DataError("chain '" + coded + "' must start and end with Home");
  return chain;
}

void ChainFrequencyTable::validate() const {
  for (int s = 0; s < kNumSpc; ++s) {
    if (rows[s].empty()) continue;
    double total = 0.0;
    for (const auto& [chain, f] : rows[s]) {
      if (f < 0.0) throw DataError("negative chain frequency");
      total += f;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw DataError("chain frequencies for " + to_string(static_cast<Spc>(s)) +
                      " sum to " + std::to_string(total));
  }
}

ChainFrequencyTable ChainFrequencyTable::load_csv(const std::filesystem::path& path) {
  ChainFrequencyTable t;
  auto tab = csv::read_file(path);
  std::size_t c_spc = tab.column("spc"), c_chain = tab.column("chain"),
              c_freq = tab.column("frequency");
  for (const auto& r : tab.rows) {
    Spc spc = spc_from_string(r[c_spc]);
    t.rows[static_cast<int>(spc)].emplace_back(chain_from_string(r[c_chain]),
                                               csv::to_double(r[c_freq], path.string()));
  }
  t.validate();
  return t;
}

void ChainFrequencyTable::write_csv(const std::filesystem::path& path) const {
  csv::Writer w(path);
  w.field(std::string("spc")).field("chain").field("frequency");
  w.end_row();
  for (int s = 0; s < kNumSpc; ++s)
    for (const auto& [chain, f] : rows[s]) {
      w.field(to_string(static_cast<Spc>(s))).field(chain_to_string(chain)).field(f);
      w.end_row();
    }
  w.close();
}

void EmpiricalDistribution::validate() const {
  if (bins.empty()) throw DataError("empty empirical distribution");
  double total = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const Bin& b = bins[i];
    if (b.end_sec <= b.start_sec) throw DataError("empirical distribution bin not ascending");
    if (i > 0 && b.start_sec < bins[i - 1].end_sec)
      throw DataError("empirical distribution bins overlap or unsorted");
    if (b.weight < 0.0) throw DataError("negative bin weight");
    total += b.weight;
  }
  if (total <= 0.0) throw DataError("empirical distribution has zero total weight");
}

double EmpiricalDistribution::total_weight() const {
  double total = 0.0;
  for (const auto& b : bins) total += b.weight;
  return total;
}

std::int64_t sample_from_distribution_at(const EmpiricalDistribution& dist, double u1,
                                         double u2) {
  const double target = u1 * dist.total_weight();
  double cum = 0.0;
  const EmpiricalDistribution::Bin* chosen = &dist.bins.back();
  for (const auto& b : dist.bins) {
    cum += b.weight;
    if (target < cum && b.weight > 0.0) {
      chosen = &b;
      break;
    }
  }
  const double span = static_cast<double>(chosen->end_sec - chosen->start_sec);
  return chosen->start_sec + static_cast<std::int64_t>(u2 * span);
}

std::int64_t sample_from_distribution(const EmpiricalDistribution& dist, Rng& rng) {
  double u1 = rng.uniform01();
  double u2 = rng.uniform01();
  return sample_from_distribution_at(dist, u1, u2);
}

namespace {
const std::array<std::string, 2> kKindNames = {"startTime", "duration"};
}

TimeModels TimeModels::load_csv(const std::filesystem::path& path) {
  TimeModels t;
  auto tab = csv::read_file(path);
  std::size_t c_type = tab.column("activityType"), c_kind = tab.column("kind"),
              c_start = tab.column("binStartSec"), c_end = tab.column("binEndSec"),
              c_w = tab.column("weight");
  for (const auto& r : tab.rows) {
    ActivityType type = activity_type_from_string(r[c_type]);
    int kind = -1;
    for (std::size_t k = 0; k < kKindNames.size(); ++k)
      if (kKindNames[k] == r[c_kind]) kind = static_cast<int>(k);
    if (kind < 0) throw DataError(path.string() + ": unknown time model kind '" + r[c_kind] + "'");
    t.dists[static_cast<int>(type)][kind].bins.push_back(
        {csv::to_i64(r[c_start], path.string()), csv::to_i64(r[c_end], path.string()),
         csv::to_double(r[c_w], path.string())});
  }
  for (int a = 0; a < kNumActivityTypes; ++a)
    for (int k = 0; k < 2; ++k) t.dists[a][k].validate();
  return t;
}

void TimeModels::write_csv(const std::filesystem::path& path) const {
  csv::Writer w(path);
  w.field(std::string("activityType"))
      .field("kind")
      .field("binStartSec")
      .field("binEndSec")
      .field("weight");
  w.end_row();
  for (int a = 0; a < kNumActivityTypes; ++a)
    for (int k = 0; k < 2; ++k)
      for (const auto& b : dists[a][k].bins) {
        w.field(to_string(static_cast<ActivityType>(a)))
            .field(kKindNames[k])
            .field(b.start_sec)
            .field(b.end_sec)
            .field(b.weight);
        w.end_row();
      }
  w.close();
}

bool Facility::serves(ActivityType t) const {
  return std::find(types.begin(), types.end(), t) != types.end();
}

const Facility& FacilitySet::by_id(Id id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw DataError("unknown facility id " + std::to_string(id));
  return facilities[it->second];
}

void FacilitySet::build_index() {
  std::sort(facilities.begin(), facilities.end(),
            [](const Facility& a, const Facility& b) { return a.facility_id < b.facility_id; });
  index_.clear();
  zone_type_.clear();
  for (auto& v : by_type_) v.clear();
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    const Facility& f = facilities[i];
    if (!index_.emplace(f.facility_id, static_cast<int>(i)).second)
      throw DataError("duplicate facility id " + std::to_string(f.facility_id));
    for (ActivityType t : f.types) {
      zone_type_[{f.zone_id, static_cast<int>(t)}].push_back(static_cast<int>(i));
      by_type_[static_cast<int>(t)].push_back(static_cast<int>(i));
    }
  }
}

void FacilitySet::validate() const {
  for (const auto& f : facilities) {
    if (f.size <= 0.0)
      throw DataError("facility " + std::to_string(f.facility_id) + " has non-positive size");
    if (f.types.empty())
      throw DataError("facility " + std::to_string(f.facility_id) + " serves no types");
  }
}

FacilitySet FacilitySet::load_csv(const std::filesystem::path& path) {
  FacilitySet fs;
  auto tab = csv::read_file(path);
  std::size_t c_id = tab.column("facilityId"), c_zone = tab.column("zoneId"),
              c_x = tab.column("x"), c_y = tab.column("y"), c_types = tab.column("types"),
              c_size = tab.column("size");
  for (const auto& r : tab.rows) {
    Facility f;
    f.facility_id = csv::to_i64(r[c_id], path.string());
    f.zone_id = csv::to_i64(r[c_zone], path.string());
    f.x = csv::to_double(r[c_x], path.string());
    f.y = csv::to_double(r[c_y], path.string());
    for (const auto& t : csv::split(r[c_types], '|'))
      f.types.push_back(activity_type_from_string(t));
    f.size = csv::to_double(r[c_size], path.string());
    fs.facilities.push_back(std::move(f));
  }
  fs.build_index();
  fs.validate();
  return fs;
}

void FacilitySet::write_csv(const std::filesystem::path& path) const {
  csv::Writer w(path);
  w.field(std::string("facilityId")).field("zoneId").field("x").field("y").field("types").field(
      "size");
  w.end_row();
  for (const auto& f : facilities) {
    std::string types;
    for (std::size_t i = 0; i < f.types.size(); ++i) {
      if (i) types += '|';
      types += to_string(f.types[i]);
    }
    w.field(f.facility_id).field(f.zone_id).field(f.x).field(f.y).field(types).field(f.size);
    w.end_row();
  }
  w.close();
}

std::vector<int> FacilitySet::eligible_in_zone(Id zone, ActivityType t) const {
  auto it = zone_type_.find({zone, static_cast<int>(t)});
  if (it == zone_type_.end()) return {};
  return it->second;
}

std::vector<int> FacilitySet::eligible_anywhere(ActivityType t) const {
  return by_type_[static_cast<int>(t)];
}

void OdModel::validate() const {
  for (const auto& [key, row] : rows) {
    double total = 0.0;
    for (const auto& [zone, p] : row) {
      if (p < 0.0) throw DataError("negative od probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw DataError("od row (" + std::to_string(key.first) + ", " +
                      to_string(static_cast<ActivityType>(key.second)) + ") sums to " +
                      std::to_string(total));
  }
}

OdModel OdModel::load_csv(const std::filesystem::path& path) {
  OdModel od;
  auto tab = csv::read_file(path);
  std::size_t c_o = tab.column("originZone"), c_t = tab.column("activityType"),
              c_d = tab.column("destZone"), c_p = tab.column("prob");
  for (const auto& r : tab.rows) {
    Id origin = csv::to_i64(r[c_o], path.string());
    ActivityType t = activity_type_from_string(r[c_t]);
    od.rows[{origin, static_cast<int>(t)}].emplace_back(
        csv::to_i64(r[c_d], path.string()), csv::to_double(r[c_p], path.string()));
  }
  od.validate();
  return od;
}

void OdModel::write_csv(const std::filesystem::path& path) const {
  csv::Writer w(path);
  w.field(std::string("originZone")).field("activityType").field("destZone").field("prob");
  w.end_row();
  for (const auto& [key, row] : rows)
    for (const auto& [dest, p] : row) {
      w.field(key.first)
          .field(to_string(static_cast<ActivityType>(key.second)))
          .field(dest)
          .field(p);
      w.end_row();
    }
  w.close();
}

ActivityChain assign_activity_chain(const Person& person, const ChainFrequencyTable& table,
                                    Rng& rng) {
  const auto& row = table.rows[static_cast<int>(person.spc)];
  if (row.empty())
    throw ConfigError("no activity chain row for spc " + to_string(person.spc));
  std::vector<double> weights;
  weights.reserve(row.size());
  for (const auto& [chain, f] : row) weights.push_back(f);
  return row[rng.categorical(weights)].first;
}

Id choose_destination_zone(Id origin_zone, ActivityType type, const OdModel& od, Rng& rng,
                           Id home_zone) {
  if (type == ActivityType::Home) return home_zone;
  auto it = od.rows.find({origin_zone, static_cast<int>(type)});
  if (it == od.rows.end())
    throw ConfigError("no od row for zone " + std::to_string(origin_zone) + ", type " +
                      to_string(type));
  std::vector<double> weights;
  weights.reserve(it->second.size());
  for (const auto& [zone, p] : it->second) weights.push_back(p);
  return it->second[rng.categorical(weights)].first;
}

FacilityChoice choose_facility(Id zone, ActivityType type, const FacilitySet& facilities,
                               double origin_x, double origin_y, double theta_m, Rng& rng) {
  FacilityChoice out;
  std::vector<int> eligible = facilities.eligible_in_zone(zone, type);
  if (eligible.empty()) {
    // nearest eligible facility anywhere
    out.fell_back = true;
    const auto& all = facilities.eligible_anywhere(type);
    if (all.empty())
      throw ConfigError("no facility anywhere serves activity type " + to_string(type));
    int best = -1;
    double best_d2 = 0.0;
    for (int fi : all) {
      const Facility& f = facilities.facilities[fi];
      double dx = f.x - origin_x, dy = f.y - origin_y;
      double d2 = dx * dx + dy * dy;
      if (best < 0 || d2 < best_d2) {
        best = fi;
        best_d2 = d2;
      }
    }
    out.facility_id = facilities.facilities[best].facility_id;
    return out;
  }
  std::vector<double> weights;
  weights.reserve(eligible.size());
  for (int fi : eligible) {
    const Facility& f = facilities.facilities[fi];
    double d = std::hypot(f.x - origin_x, f.y - origin_y);
    weights.push_back(f.size * std::exp(-d / theta_m));
  }
  out.facility_id = facilities.facilities[eligible[rng.categorical(weights)]].facility_id;
  return out;
}

DailyPlan build_initial_plan(const Person& person, const ActivityChain& chain,
                             const OdModel& od, const FacilitySet& facilities,
                             const TimeModels& times, const HomeAnchor& home,
                             int household_cars, const PlanGenConfig& cfg, Rng& rng) {
  DailyPlan plan;
  plan.activities.reserve(chain.size());

  double cur_x = home.x, cur_y = home.y;
  Id cur_zone = home.zone_id;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    Activity act;
    act.type = chain[i];
    if (act.type == ActivityType::Home) {
      act.facility_id = home.facility_id;
      cur_zone = home.zone_id;
      cur_x = home.x;
      cur_y = home.y;
    } else {
      cur_zone = choose_destination_zone(cur_zone, act.type, od, rng, home.zone_id);
      auto choice =
          choose_facility(cur_zone, act.type, facilities, cur_x, cur_y, cfg.gravity_theta_m, rng);
      act.facility_id = choice.facility_id;
      const Facility& f = facilities.by_id(choice.facility_id);
      cur_x = f.x;
      cur_y = f.y;
      cur_zone = f.zone_id;
    }
    plan.activities.push_back(act);
  }

  // First activity ends at the sampled start time of the second; later ones
  // end a sampled duration after their predecessor. The final activity is
  // open-ended.
  if (chain.size() > 1) {
    std::int64_t t = sample_from_distribution(
        times.at(chain[1], TimeModelKind::startTime), rng);
    t = std::max<std::int64_t>(t, cfg.min_gap_sec);
    plan.activities[0].planned_end_sec = t;
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
      std::int64_t dur =
          sample_from_distribution(times.at(chain[i], TimeModelKind::duration), rng);
      t += std::max<std::int64_t>(dur, cfg.min_gap_sec);
      plan.activities[i].planned_end_sec = t;
    }
  }

  // Seed modes, availability-filtered.
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    Leg leg;
    std::vector<Mode> modes;
    std::vector<double> weights;
    if (household_cars >= 1) {
      modes.push_back(Mode::car);
      weights.push_back(cfg.mode_seed.car);
    }
    modes.push_back(Mode::pt);
    weights.push_back(cfg.mode_seed.pt);
    modes.push_back(Mode::walk);
    weights.push_back(cfg.mode_seed.walk);
    leg.mode = modes[rng.categorical(weights)];
    plan.legs.push_back(leg);
  }

  plan.validate();
  return plan;
}

void write_plans_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<Id, const DailyPlan*>>& plans) {
  csv::Writer w(path);
  w.field(std::string("personId"))
      .field("elemIndex")
      .field("kind")
      .field("activityType|mode")
      .field("facilityId")
      .field("plannedEndTimeSec");
  w.end_row();
  for (const auto& [pid, plan] : plans) {
    std::int64_t elem = 0;
    for (std::size_t i = 0; i < plan->activities.size(); ++i) {
      const Activity& a = plan->activities[i];
      w.field(pid).field(elem++).field("activity").field(to_string(a.type)).field(
          a.facility_id);
      if (a.planned_end_sec >= 0)
        w.field(a.planned_end_sec);
      else
        w.blank();
      w.end_row();
      if (i < plan->legs.size()) {
        w.field(pid).field(elem++).field("leg").field(to_string(plan->legs[i].mode));
        w.blank().blank();
        w.end_row();
      }
    }
  }
  w.close();
}

}  // namespace rtsim::activitygen
