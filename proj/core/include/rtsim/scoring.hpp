#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>

#include "rtsim/types.hpp"

namespace rtsim {

// Leg scoring
// -----------
// Non-robotaxi modes:
//   S = C + beta_trav * (t_ivt + t_wait) + beta_dist * d + beta_money * cost
//       + nu_co(cars) + gamma_pl(parking)
// Robotaxi:
//   S = k_ut * C_rt + beta_trav_car * (k_ivt * t_ivt + wait_mult * k_wt * t_wait)
// with times in minutes and distances in km. The taste factors (k_ut, k_ivt,
// k_wt) are 1 for every mode except robotaxi, and 1 everywhere when disabled.

struct ModeParams {
  double c = 0.0;                // constant utility of mode
  double beta_trav_min = 0.0;    // utils per minute of travel
  double beta_dist_km = 0.0;     // utils per km (car only)
  double nu_car1 = 0.0;          // household owns exactly one car
  double nu_car2plus = 0.0;      // two or more cars
  double gamma_park_med = 0.0;   // medium parking availability at destination
  double gamma_park_high = 0.0;  // high parking availability at destination
};

struct ScoringParams {
  std::array<std::array<ModeParams, kNumModes>, kNumSpc> table{};
  double beta_money_per_eur = -1.0;
  double wait_multiplier = 10.0;  // robotaxi waiting disutility vs in-vehicle
  double pt_fare_eur = 1.43;
  double stuck_penalty = -100.0;  // added per stuck or rejected leg

  const ModeParams& at(Spc spc, Mode mode) const {
    return table[static_cast<int>(spc)][static_cast<int>(mode)];
  }
  ModeParams& at(Spc spc, Mode mode) {
    return table[static_cast<int>(spc)][static_cast<int>(mode)];
  }

  // Estimated categorized coefficients: car/pt/walk rows for the six
  // socio-professional categories, robotaxi rows mirroring the car column
  // (constant and travel-time coefficient) with no distance, ownership or
  // parking terms. rt_c_offset shifts every robotaxi constant; the service
  // subscription enters the calibration through it.
  static ScoringParams defaults(double rt_c_offset = 0.0);

  // spc,mode,param,value rows. Unknown params are rejected. Rows for
  // spc="*"/mode="*" set the scalar knobs (beta_money, wait_multiplier,
  // pt_fare, stuck_penalty).
  static ScoringParams load_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;
};

struct TasteFactors {
  double k_ut = 1.0;
  double k_ivt = 1.0;
  double k_wt = 1.0;
};

// Raw curve values plus normalization divisors. normalize_taste_factors
// fills the divisors so each factor has population mean one; until then they
// are 1 and the curves are used as given.
struct TasteFactorConfig {
  bool enabled = true;
  double sex_female = 0.8;
  double sex_male = 1.2;
  double age_young_value = 1.15;  // constant below age_young_max
  double age_old_value = 0.70;    // constant at/above age_old_min
  double age_young_max = 45.0;
  double age_old_min = 60.0;
  double income_lambda = 0.25;
  double income_ref_eur = 0.0;  // <= 0: use population median income
  double income_clip_lo = 0.5;
  double income_clip_hi = 2.0;

  double norm_sex = 1.0;
  double norm_age = 1.0;
  double norm_income = 1.0;

  double raw_sex(Sex s) const { return s == Sex::female ? sex_female : sex_male; }
  double raw_age(double age) const;
  double raw_income(double income_eur) const;  // clipped
};

// Population-mean-one rescaling of the three curves; the reference income is
// resolved to the population median of household incomes when unset.
// Incomes are the household income of each person (household size weighted).
class PopulationIncome;  // fwd: see below
TasteFactorConfig normalize_taste_factors(const Population& pop, TasteFactorConfig raw);

// (k_ut, k_ivt, k_wt) for one person. cfg must be normalized (or carry unit
// divisors). Returns (1,1,1) when disabled.
TasteFactors taste_factors(const Person& person, double household_income_eur,
                           const TasteFactorConfig& cfg);

struct LegRecord {
  Mode mode = Mode::walk;
  Spc spc = Spc::Employed;
  double t_ivt_min = 0.0;
  double t_wait_min = 0.0;
  double dist_km = 0.0;
  double monetary_cost_eur = 0.0;
  int household_cars = 0;
  ParkingLevel parking = ParkingLevel::low;
};

double score_leg(const LegRecord& leg, const ScoringParams& params,
                 const TasteFactors& factors);

// Activity scoring (log-utility of performing, linear lateness penalty).
struct ActivityParams {
  double beta_perf_per_h = 6.0;
  double typical_dur_sec = 3600.0;
  double zero_utility_dur_sec = 3600.0 / M_E;
  double beta_late_per_h = 0.0;  // <= 0
  std::optional<std::int64_t> latest_start_sec;
};

struct ActivityScoringParams {
  std::array<ActivityParams, kNumActivityTypes> by_type{};
  static ActivityScoringParams defaults();
  const ActivityParams& at(ActivityType t) const { return by_type[static_cast<int>(t)]; }
  ActivityParams& at(ActivityType t) { return by_type[static_cast<int>(t)]; }
};

double score_activity(ActivityType type, std::int64_t realized_dur_sec,
                      std::int64_t realized_start_sec, const ActivityScoringParams& params);

// Whole-plan score over an executed plan. The first and last activities are
// merged into a single wrapped activity when they share a type, so overnight
// time is not rewarded twice. Throws DataError when the plan is unexecuted.
struct PlanScoringContext {
  Spc spc = Spc::Employed;
  int household_cars = 0;
  std::function<ParkingLevel(Id facility_id)> parking_at;  // nullptr: all low
};

double score_plan(const DailyPlan& plan, const ScoringParams& params,
                  const ActivityScoringParams& act_params, const TasteFactors& factors,
                  const PlanScoringContext& ctx);

}  // namespace rtsim
