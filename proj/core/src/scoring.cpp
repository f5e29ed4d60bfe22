#include "rtsim/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "rtsim/csv.hpp"

namespace rtsim {

namespace {

// Estimated categorized scoring coefficients, modes car/pt/walk, categories
// Employed, Unemployed, Retired, Student14Plus, Under14, Homemaker.
struct Col {
  double car_c, car_bt, car_bd, car_v1, car_v2, car_gm, car_gh;
  double pt_c, pt_bt, pt_v1, pt_v2, pt_gm, pt_gh;
  double walk_bt;
};

constexpr std::array<Col, kNumSpc> kEstimated = {{
    // Employed
    {-3.6020, -0.1062, -0.3000, 2.6257, 3.3727, -0.1465, -0.7282,
     -3.9290, -0.0327, -0.7330, -1.0170, 0.9463, 0.5606,
     -0.8137},
    // Unemployed
    {-2.7890, -0.1290, -0.3000, 3.3000, 3.5930, 2.3770, -2.2050,
     -2.2850, -0.0910, 0.0350, 0.1710, -2.5320, -1.0530,
     -0.7236},
    // Retired
    {-2.5520, -0.3794, -0.3000, 1.7200, 2.4910, -0.4820, 0.1040,
     -3.6290, -0.2088, -1.0540, -1.7670, 1.4040, 1.1650,
     -0.7308},
    // Student14Plus
    {-3.8919, -0.2962, -0.3000, 1.8292, 2.3111, -1.7695, -1.4279,
     -2.2643, -0.2385, 0.1292, 0.1848, -1.4570, -1.0114,
     -3.0852},
    // Under14
    {10.7037, -0.4286, -0.3000, 2.9565, 3.9719, -15.2280, -15.1742,
     11.4187, -0.2191, -0.4358, -0.7283, -14.6497, -14.3791,
     -0.8051},
    // Homemaker
    {-4.2870, -0.5477, -0.3000, 3.0860, 5.0510, -0.1020, 0.3920,
     -4.6340, -0.2202, 0.2950, 1.0570, 0.9190, 1.0200,
     -0.8708},
}};

const std::vector<std::string> kParamNames = {
    "c", "beta_trav_min", "beta_dist_km", "nu_car1", "nu_car2plus",
    "gamma_park_med", "gamma_park_high"};

double* param_slot(ModeParams& mp, const std::string& name) {
  if (name == "c") return &mp.c;
  if (name == "beta_trav_min") return &mp.beta_trav_min;
  if (name == "beta_dist_km") return &mp.beta_dist_km;
  if (name == "nu_car1") return &mp.nu_car1;
  if (name == "nu_car2plus") return &mp.nu_car2plus;
  if (name == "gamma_park_med") return &mp.gamma_park_med;
  if (name == "gamma_park_high") return &mp.gamma_park_high;
  return nullptr;
}

double get_param(const ModeParams& mp, const std::string& name) {
  return *param_slot(const_cast<ModeParams&>(mp), name);
}

}  // namespace

ScoringParams ScoringParams::defaults(double rt_c_offset) {
  ScoringParams p;
  for (int s = 0; s < kNumSpc; ++s) {
    const Col& c = kEstimated[s];
    ModeParams& car = p.table[s][static_cast<int>(Mode::car)];
    car = {c.car_c, c.car_bt, c.car_bd, c.car_v1, c.car_v2, c.car_gm, c.car_gh};
    ModeParams& pt = p.table[s][static_cast<int>(Mode::pt)];
    pt = {c.pt_c, c.pt_bt, 0.0, c.pt_v1, c.pt_v2, c.pt_gm, c.pt_gh};
    ModeParams& walk = p.table[s][static_cast<int>(Mode::walk)];
    walk = {0.0, c.walk_bt, 0.0, 0.0, 0.0, 0.0, 0.0};
    ModeParams& rt = p.table[s][static_cast<int>(Mode::robotaxi)];
    rt = {c.car_c + rt_c_offset, c.car_bt, 0.0, 0.0, 0.0, 0.0, 0.0};
  }
  return p;
}

ScoringParams ScoringParams::load_csv(const std::filesystem::path& path) {
  ScoringParams p = defaults();
  auto t = csv::read_file(path);
  std::size_t c_spc = t.column("spc");
  std::size_t c_mode = t.column("mode");
  std::size_t c_param = t.column("param");
  std::size_t c_value = t.column("value");
  for (const auto& r : t.rows) {
    const std::string ctx = path.string();
    double v = csv::to_double(r[c_value], ctx);
    if (r[c_spc] == "*") {
      if (r[c_param] == "beta_money_per_eur")
        p.beta_money_per_eur = v;
      else if (r[c_param] == "wait_multiplier")
        p.wait_multiplier = v;
      else if (r[c_param] == "pt_fare_eur")
        p.pt_fare_eur = v;
      else if (r[c_param] == "stuck_penalty")
        p.stuck_penalty = v;
      else
        throw ConfigError(ctx + ": unknown scalar scoring param '" + r[c_param] + "'");
      continue;
    }
    Spc spc = spc_from_string(r[c_spc]);
    Mode mode = mode_from_string(r[c_mode]);
    double* slot = param_slot(p.at(spc, mode), r[c_param]);
    if (!slot)
      throw ConfigError(ctx + ": unknown scoring param '" + r[c_param] + "'");
    *slot = v;
  }
  return p;
}

void ScoringParams::write_csv(const std::filesystem::path& path) const {
  csv::Writer w(path);
  w.field(std::string("spc")).field("mode").field("param").field("value");
  w.end_row();
  for (Spc spc : kAllSpc) {
    for (Mode mode : kAllModes) {
      const ModeParams& mp = at(spc, mode);
      for (const auto& name : kParamNames) {
        // walk and robotaxi rows carry no ownership/parking/distance terms
        double v = get_param(mp, name);
        if ((mode == Mode::walk || mode == Mode::robotaxi) && name != "c" &&
            name != "beta_trav_min")
          continue;
        if (mode == Mode::pt && name == "beta_dist_km") continue;
        w.field(to_string(spc)).field(to_string(mode)).field(name).field_fixed(v, 4);
        w.end_row();
      }
    }
  }
  w.field(std::string("*")).field("*").field("beta_money_per_eur").field_fixed(
      beta_money_per_eur, 4);
  w.end_row();
  w.field(std::string("*")).field("*").field("wait_multiplier").field_fixed(wait_multiplier,
                                                                            4);
  w.end_row();
  w.field(std::string("*")).field("*").field("pt_fare_eur").field_fixed(pt_fare_eur, 4);
  w.end_row();
  w.field(std::string("*")).field("*").field("stuck_penalty").field_fixed(stuck_penalty, 4);
  w.end_row();
  w.close();
}

double TasteFactorConfig::raw_age(double age) const {
  if (age < age_young_max) return age_young_value;
  if (age >= age_old_min) return age_old_value;
  double t = (age - age_young_max) / (age_old_min - age_young_max);
  return age_young_value + t * (age_old_value - age_young_value);
}

double TasteFactorConfig::raw_income(double income_eur) const {
  double ref = income_ref_eur > 0.0 ? income_ref_eur : 1.0;
  double k = 1.0 + income_lambda * std::log(income_eur / ref);
  return std::clamp(k, income_clip_lo, income_clip_hi);
}

TasteFactorConfig normalize_taste_factors(const Population& pop, TasteFactorConfig raw) {
  if (pop.persons.empty()) throw DataError("normalize_taste_factors: empty population");
  if (raw.income_ref_eur <= 0.0) {
    std::vector<double> incomes;
    incomes.reserve(pop.persons.size());
    for (const auto& p : pop.persons)
      incomes.push_back(pop.household(p.household_id).income_eur);
    std::sort(incomes.begin(), incomes.end());
    raw.income_ref_eur = incomes[incomes.size() / 2];
  }
  raw.norm_sex = raw.norm_age = raw.norm_income = 1.0;
  double sum_sex = 0.0, sum_age = 0.0, sum_inc = 0.0;
  for (const auto& p : pop.persons) {
    sum_sex += raw.raw_sex(p.sex);
    sum_age += raw.raw_age(static_cast<double>(p.age));
    sum_inc += raw.raw_income(pop.household(p.household_id).income_eur);
  }
  const double n = static_cast<double>(pop.persons.size());
  raw.norm_sex = sum_sex / n;
  raw.norm_age = sum_age / n;
  raw.norm_income = sum_inc / n;
  return raw;
}

TasteFactors taste_factors(const Person& person, double household_income_eur,
                           const TasteFactorConfig& cfg) {
  if (!cfg.enabled) return {1.0, 1.0, 1.0};
  const double k_age = cfg.raw_age(static_cast<double>(person.age)) / cfg.norm_age;
  const double k_sex = cfg.raw_sex(person.sex) / cfg.norm_sex;
  const double k_inc = cfg.raw_income(household_income_eur) / cfg.norm_income;
  TasteFactors f;
  f.k_ut = 2.0 - (k_age + k_sex) / 2.0;
  f.k_ivt = 1.0 / k_inc;
  f.k_wt = k_inc;
  return f;
}

double score_leg(const LegRecord& leg, const ScoringParams& params,
                 const TasteFactors& factors) {
  const ModeParams& mp = params.at(leg.spc, leg.mode);
  if (leg.mode == Mode::robotaxi) {
    const ModeParams& car = params.at(leg.spc, Mode::car);
    return factors.k_ut * mp.c +
           car.beta_trav_min * (factors.k_ivt * leg.t_ivt_min +
                                params.wait_multiplier * factors.k_wt * leg.t_wait_min);
  }
  double s = mp.c + mp.beta_trav_min * (leg.t_ivt_min + leg.t_wait_min) +
             mp.beta_dist_km * leg.dist_km +
             params.beta_money_per_eur * leg.monetary_cost_eur;
  if (leg.household_cars == 1)
    s += mp.nu_car1;
  else if (leg.household_cars >= 2)
    s += mp.nu_car2plus;
  if (leg.parking == ParkingLevel::medium)
    s += mp.gamma_park_med;
  else if (leg.parking == ParkingLevel::high)
    s += mp.gamma_park_high;
  return s;
}

ActivityScoringParams ActivityScoringParams::defaults() {
  ActivityScoringParams p;
  auto set = [&p](ActivityType t, double typ_h) {
    ActivityParams& ap = p.at(t);
    ap.beta_perf_per_h = 6.0;
    ap.typical_dur_sec = typ_h * 3600.0;
    ap.zero_utility_dur_sec = ap.typical_dur_sec / M_E;
  };
  set(ActivityType::Home, 12.0);
  set(ActivityType::Work, 8.0);
  set(ActivityType::OtherWork, 1.0);
  set(ActivityType::Study, 6.0);
  set(ActivityType::Shopping, 1.0);
  set(ActivityType::LeisureVisit, 1.0);
  set(ActivityType::Errands, 1.0);
  set(ActivityType::Escort, 1.0);
  p.at(ActivityType::Work).beta_late_per_h = -18.0;
  p.at(ActivityType::Work).latest_start_sec = hms(9);
  p.at(ActivityType::Study).beta_late_per_h = -18.0;
  p.at(ActivityType::Study).latest_start_sec = hms(9);
  return p;
}

double score_activity(ActivityType type, std::int64_t realized_dur_sec,
                      std::int64_t realized_start_sec, const ActivityScoringParams& params) {
  const ActivityParams& ap = params.at(type);
  const double dur = std::max<double>(static_cast<double>(realized_dur_sec), 1.0);
  const double t_typ_h = ap.typical_dur_sec / 3600.0;
  double s = ap.beta_perf_per_h * t_typ_h * std::log(dur / ap.zero_utility_dur_sec);
  if (ap.latest_start_sec) {
    const double late_h =
        std::max<double>(0.0, static_cast<double>(realized_start_sec - *ap.latest_start_sec)) /
        3600.0;
    s += ap.beta_late_per_h * late_h;
  }
  return s;
}

double score_plan(const DailyPlan& plan, const ScoringParams& params,
                  const ActivityScoringParams& act_params, const TasteFactors& factors,
                  const PlanScoringContext& ctx) {
  if (!plan.executed()) throw DataError("score_plan: plan not fully executed");
  double total = 0.0;

  const std::size_t n = plan.activities.size();
  const bool wrap = n >= 2 && plan.activities.front().type == plan.activities.back().type;
  for (std::size_t i = 0; i < n; ++i) {
    const Activity& a = plan.activities[i];
    if (wrap && i == 0) continue;  // folded into the final activity
    std::int64_t dur = a.realized_end_sec - a.realized_start_sec;
    if (wrap && i == n - 1)
      dur += plan.activities.front().realized_end_sec -
             plan.activities.front().realized_start_sec;
    total += score_activity(a.type, dur, a.realized_start_sec, act_params);
  }

  for (std::size_t i = 0; i < plan.legs.size(); ++i) {
    const Leg& leg = plan.legs[i];
    LegRecord rec;
    rec.mode = leg.rejected ? Mode::walk : leg.mode;
    rec.spc = ctx.spc;
    if (leg.mode == Mode::robotaxi && !leg.rejected) {
      rec.t_wait_min = static_cast<double>(leg.wait_sec) / 60.0;
      rec.t_ivt_min =
          static_cast<double>(leg.arr_sec - leg.dep_sec - leg.wait_sec) / 60.0;
    } else {
      rec.t_ivt_min = static_cast<double>(leg.arr_sec - leg.dep_sec) / 60.0;
    }
    rec.dist_km = leg.dist_km;
    rec.monetary_cost_eur = leg.cost_eur;
    rec.household_cars = ctx.household_cars;
    rec.parking = ctx.parking_at ? ctx.parking_at(plan.activities[i + 1].facility_id)
                                 : ParkingLevel::low;
    total += score_leg(rec, params, factors);
    if (leg.stuck || leg.rejected) total += params.stuck_penalty;
  }
  return total;
}

}  // namespace rtsim
