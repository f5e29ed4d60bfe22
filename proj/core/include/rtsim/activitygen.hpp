#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rtsim/rng.hpp"
#include "rtsim/types.hpp"

namespace rtsim::activitygen {

// Ordered activity types; starts and ends with Home. A stay-at-home day is
// the single-element chain [Home].
using ActivityChain = std::vector<ActivityType>;

std::string chain_to_string(const ActivityChain& chain);    // "H-W-H"
ActivityChain chain_from_string(const std::string& coded);

struct ChainFrequencyTable {
  // per spc: (chain, relative frequency), frequencies sum to 1 per spc
  std::array<std::vector<std::pair<ActivityChain, double>>, kNumSpc> rows;

  void validate() const;
  static ChainFrequencyTable load_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;
};

// Weighted histogram over seconds (of day, or of duration).
struct EmpiricalDistribution {
  struct Bin {
    std::int64_t start_sec;
    std::int64_t end_sec;  // exclusive
    double weight;
  };
  std::vector<Bin> bins;  // ascending, weights >= 0, positive total

  void validate() const;
  double total_weight() const;
};

// Inverse-CDF sample with uniform jitter inside the chosen bin.
std::int64_t sample_from_distribution(const EmpiricalDistribution& dist, Rng& rng);
// Deterministic variant used by tests: u1 picks the bin, u2 the offset.
std::int64_t sample_from_distribution_at(const EmpiricalDistribution& dist, double u1,
                                         double u2);

enum class TimeModelKind { startTime, duration };

struct TimeModels {
  // [activity type][kind]
  std::array<std::array<EmpiricalDistribution, 2>, kNumActivityTypes> dists;

  const EmpiricalDistribution& at(ActivityType t, TimeModelKind k) const {
    return dists[static_cast<int>(t)][static_cast<int>(k)];
  }
  EmpiricalDistribution& at(ActivityType t, TimeModelKind k) {
    return dists[static_cast<int>(t)][static_cast<int>(k)];
  }
  static TimeModels load_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;
};

struct Facility {
  Id facility_id = -1;
  Id zone_id = -1;
  double x = 0.0, y = 0.0;
  std::vector<ActivityType> types;
  double size = 1.0;  // attraction weight

  bool serves(ActivityType t) const;
};

struct FacilitySet {
  std::vector<Facility> facilities;  // ascending facility id

  const Facility& by_id(Id id) const;
  void build_index();
  void validate() const;
  static FacilitySet load_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;

  // eligible facility indices in a zone, ascending id
  std::vector<int> eligible_in_zone(Id zone, ActivityType t) const;
  std::vector<int> eligible_anywhere(ActivityType t) const;

private:
  std::map<Id, int> index_;
  std::map<std::pair<Id, int>, std::vector<int>> zone_type_;
  std::array<std::vector<int>, kNumActivityTypes> by_type_;
};

// Destination-zone probability rows per (origin zone, activity type).
struct OdModel {
  std::map<std::pair<Id, int>, std::vector<std::pair<Id, double>>> rows;

  void validate() const;
  static OdModel load_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;
};

// ---- operations ----

ActivityChain assign_activity_chain(const Person& person, const ChainFrequencyTable& table,
                                    Rng& rng);

// Home is anchored to the person's home zone and ignores the model.
Id choose_destination_zone(Id origin_zone, ActivityType type, const OdModel& od, Rng& rng,
                           Id home_zone);

struct FacilityChoice {
  Id facility_id = -1;
  bool fell_back = false;  // no eligible facility in the zone
};

// Gravity draw: probability proportional to size * exp(-distance/theta).
FacilityChoice choose_facility(Id zone, ActivityType type, const FacilitySet& facilities,
                               double origin_x, double origin_y, double theta_m, Rng& rng);

struct ModeSeedShares {
  double car = 0.55;
  double pt = 0.15;
  double walk = 0.30;
};

struct PlanGenConfig {
  double gravity_theta_m = 2000.0;
  ModeSeedShares mode_seed;
  std::int64_t min_gap_sec = 60;  // strict monotonicity spacing
};

struct HomeAnchor {
  Id zone_id = -1;
  Id facility_id = -1;
  double x = 0.0, y = 0.0;
};

DailyPlan build_initial_plan(const Person& person, const ActivityChain& chain,
                             const OdModel& od, const FacilitySet& facilities,
                             const TimeModels& times, const HomeAnchor& home,
                             int household_cars, const PlanGenConfig& cfg, Rng& rng);

void write_plans_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<Id, const DailyPlan*>>& plans);

}  // namespace rtsim::activitygen
