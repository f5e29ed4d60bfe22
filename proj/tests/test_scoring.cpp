#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rtsim/csv.hpp"
#include "rtsim/rng.hpp"
#include "rtsim/scoring.hpp"

using namespace rtsim;

namespace {

LegRecord employed_car_leg() {
  LegRecord leg;
  leg.mode = Mode::car;
  leg.spc = Spc::Employed;
  leg.t_ivt_min = 20.0;
  leg.dist_km = 10.0;
  leg.household_cars = 1;
  leg.parking = ParkingLevel::medium;
  return leg;
}

TasteFactorConfig unit_cfg() {
  TasteFactorConfig cfg;  // divisors default to 1: raw curves pass through
  cfg.income_ref_eur = 20000.0;
  return cfg;
}

Population synthetic_population(std::size_t n, std::uint64_t seed) {
  Population pop;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    Household hh;
    hh.household_id = static_cast<Id>(i + 1);
    hh.zone_id = 1;
    hh.income_eur = 12000.0 + rng.uniform01() * 40000.0;
    hh.cars = static_cast<int>(rng.uniform_int(3));
    hh.member_ids = {static_cast<Id>(i + 1)};
    Person p;
    p.person_id = static_cast<Id>(i + 1);
    p.household_id = hh.household_id;
    p.sex = rng.uniform01() < 0.5 ? Sex::female : Sex::male;
    p.age = 5 + static_cast<int>(rng.uniform_int(85));
    p.spc = p.age < 14 ? Spc::Under14 : Spc::Employed;
    p.zone_id = 1;
    pop.households.push_back(hh);
    pop.persons.push_back(p);
  }
  pop.rebuild_index();
  return pop;
}

}  // namespace

TEST_CASE("worked example: employed car leg") {
  auto params = ScoringParams::defaults();
  const double s = score_leg(employed_car_leg(), params, {1, 1, 1});
  CHECK(s == doctest::Approx(-6.2468).epsilon(1e-12));
}

TEST_CASE("worked example: employed walk 15 minutes") {
  auto params = ScoringParams::defaults();
  LegRecord leg;
  leg.mode = Mode::walk;
  leg.spc = Spc::Employed;
  leg.t_ivt_min = 15.0;
  CHECK(score_leg(leg, params, {1, 1, 1}) == doctest::Approx(-12.2055).epsilon(1e-12));
}

TEST_CASE("worked example: zero walk leg scores zero") {
  auto params = ScoringParams::defaults();
  LegRecord leg;
  leg.mode = Mode::walk;
  leg.spc = Spc::Employed;
  CHECK(score_leg(leg, params, {1, 1, 1}) == 0.0);
}

TEST_CASE("worked example: robotaxi with ten-fold waiting") {
  auto params = ScoringParams::defaults();
  LegRecord leg;
  leg.mode = Mode::robotaxi;
  leg.spc = Spc::Employed;
  leg.t_ivt_min = 20.0;
  leg.t_wait_min = 5.0;
  CHECK(score_leg(leg, params, {1, 1, 1}) == doctest::Approx(-11.0360).epsilon(1e-12));
}

TEST_CASE("robotaxi ignores ownership, parking, distance and money terms") {
  auto params = ScoringParams::defaults();
  LegRecord leg;
  leg.mode = Mode::robotaxi;
  leg.spc = Spc::Homemaker;
  leg.t_ivt_min = 10.0;
  leg.household_cars = 2;
  leg.parking = ParkingLevel::high;
  leg.dist_km = 50.0;
  leg.monetary_cost_eur = 99.0;
  const double with_extras = score_leg(leg, params, {1, 1, 1});
  leg.household_cars = 0;
  leg.parking = ParkingLevel::low;
  leg.dist_km = 0.0;
  leg.monetary_cost_eur = 0.0;
  CHECK(with_extras == score_leg(leg, params, {1, 1, 1}));
}

TEST_CASE("score_leg is linear in time, wait and distance") {
  auto params = ScoringParams::defaults();
  LegRecord leg = employed_car_leg();
  const double base = score_leg(leg, params, {1, 1, 1});
  leg.t_ivt_min += 1.0;
  CHECK(score_leg(leg, params, {1, 1, 1}) - base ==
        doctest::Approx(-0.1062).epsilon(1e-9));
  leg = employed_car_leg();
  leg.dist_km += 1.0;
  CHECK(score_leg(leg, params, {1, 1, 1}) - base == doctest::Approx(-0.3).epsilon(1e-9));
  leg = employed_car_leg();
  leg.t_wait_min += 2.0;
  CHECK(score_leg(leg, params, {1, 1, 1}) - base ==
        doctest::Approx(2.0 * -0.1062).epsilon(1e-9));
}

TEST_CASE("taste factors disabled return unity") {
  TasteFactorConfig cfg = unit_cfg();
  cfg.enabled = false;
  Person p{1, 1, 70, Sex::female, Spc::Retired, 1};
  auto f = taste_factors(p, 50000, cfg);
  CHECK(f.k_ut == 1.0);
  CHECK(f.k_ivt == 1.0);
  CHECK(f.k_wt == 1.0);
}

TEST_CASE("taste factor worked example: male, 30, reference income") {
  Person p{1, 1, 30, Sex::male, Spc::Employed, 1};
  auto f = taste_factors(p, 20000.0, unit_cfg());
  CHECK(f.k_ut == doctest::Approx(0.825).epsilon(1e-12));
  CHECK(f.k_ivt == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.k_wt == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("taste factor worked example: female, 70, income ref*e") {
  Person p{1, 1, 70, Sex::female, Spc::Retired, 1};
  auto f = taste_factors(p, 20000.0 * M_E, unit_cfg());
  CHECK(f.k_ut == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(f.k_wt == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(f.k_ivt == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("age 52.5 sits at the linear midpoint") {
  TasteFactorConfig cfg = unit_cfg();
  CHECK(cfg.raw_age(52.5) ==
        doctest::Approx((cfg.age_young_value + cfg.age_old_value) / 2.0).epsilon(1e-12));
  CHECK(cfg.raw_age(44.999) == cfg.age_young_value);
  CHECK(cfg.raw_age(60.0) == cfg.age_old_value);
}

TEST_CASE("income clip keeps the factor positive") {
  TasteFactorConfig cfg = unit_cfg();
  CHECK(cfg.raw_income(1.0) == cfg.income_clip_lo);     // ln would send it negative
  CHECK(cfg.raw_income(1e12) == cfg.income_clip_hi);
}

TEST_CASE("k_ut strictly decreasing in age+sex curves, k_ivt*k_wt == 1") {
  TasteFactorConfig cfg = unit_cfg();
  Person young_male{1, 1, 20, Sex::male, Spc::Employed, 1};
  Person old_male{2, 1, 80, Sex::male, Spc::Retired, 1};
  CHECK(taste_factors(young_male, 20000, cfg).k_ut <
        taste_factors(old_male, 20000, cfg).k_ut + 1e-15);
  // the raw age curve is higher for the young, so k_ut is lower (eq. 3)
  Rng rng(77);
  for (int i = 0; i < 100000; ++i) {
    double income = 1000.0 + rng.uniform01() * 99000.0;
    auto f = taste_factors(young_male, income, cfg);
    CHECK(std::abs(f.k_ivt * f.k_wt - 1.0) <= 1e-12);
  }
}

TEST_CASE("normalization: balanced sexes already have mean one") {
  auto pop = synthetic_population(10000, 3);
  TasteFactorConfig raw = unit_cfg();
  auto cfg = normalize_taste_factors(pop, raw);
  double mean_sex = 0, mean_age = 0, mean_inc = 0;
  for (const auto& p : pop.persons) {
    auto f = taste_factors(p, pop.household(p.household_id).income_eur, cfg);
    (void)f;
    mean_sex += cfg.raw_sex(p.sex) / cfg.norm_sex;
    mean_age += cfg.raw_age(p.age) / cfg.norm_age;
    mean_inc += cfg.raw_income(pop.household(p.household_id).income_eur) / cfg.norm_income;
  }
  const double n = static_cast<double>(pop.persons.size());
  CHECK(std::abs(mean_sex / n - 1.0) <= 1e-9);
  CHECK(std::abs(mean_age / n - 1.0) <= 1e-9);
  CHECK(std::abs(mean_inc / n - 1.0) <= 1e-9);
}

TEST_CASE("normalization: all-male population rescales k_sex to one") {
  auto pop = synthetic_population(100, 4);
  for (auto& p : pop.persons) p.sex = Sex::male;
  auto cfg = normalize_taste_factors(pop, unit_cfg());
  CHECK(cfg.norm_sex == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(cfg.raw_sex(Sex::male) / cfg.norm_sex == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalization preserves ratios between persons") {
  auto pop = synthetic_population(1000, 5);
  TasteFactorConfig raw = unit_cfg();
  auto cfg = normalize_taste_factors(pop, raw);
  const double r_raw = raw.raw_age(20.0) / raw.raw_age(80.0);
  const double r_norm = (cfg.raw_age(20.0) / cfg.norm_age) / (cfg.raw_age(80.0) / cfg.norm_age);
  CHECK(r_norm == doctest::Approx(r_raw).epsilon(1e-12));
}

TEST_CASE("median income becomes the reference when unset") {
  auto pop = synthetic_population(101, 6);
  TasteFactorConfig raw;  // ref unset
  auto cfg = normalize_taste_factors(pop, raw);
  std::vector<double> incomes;
  for (const auto& p : pop.persons)
    incomes.push_back(pop.household(p.household_id).income_eur);
  std::sort(incomes.begin(), incomes.end());
  CHECK(cfg.income_ref_eur == doctest::Approx(incomes[50]).epsilon(1e-12));
}

TEST_CASE("eq 1 equivalence when factors are off (randomized)") {
  auto params = ScoringParams::defaults();
  Rng rng(99);
  for (int i = 0; i < 20000; ++i) {
    LegRecord leg;
    leg.spc = kAllSpc[rng.uniform_int(kNumSpc)];
    leg.mode = kAllModes[rng.uniform_int(kNumModes)];
    leg.t_ivt_min = rng.uniform01() * 120.0;
    leg.t_wait_min = rng.uniform01() * 20.0;
    leg.dist_km = rng.uniform01() * 40.0;
    leg.monetary_cost_eur = rng.uniform01() * 10.0;
    leg.household_cars = static_cast<int>(rng.uniform_int(4));
    leg.parking = static_cast<ParkingLevel>(rng.uniform_int(3));
    // independent eq-1 style evaluation
    const ModeParams& mp = params.at(leg.spc, leg.mode);
    double expected;
    if (leg.mode == Mode::robotaxi) {
      expected = mp.c + params.at(leg.spc, Mode::car).beta_trav_min *
                            (leg.t_ivt_min + params.wait_multiplier * leg.t_wait_min);
    } else {
      double nu = leg.household_cars == 1
                      ? mp.nu_car1
                      : (leg.household_cars >= 2 ? mp.nu_car2plus : 0.0);
      double gamma = leg.parking == ParkingLevel::medium
                         ? mp.gamma_park_med
                         : (leg.parking == ParkingLevel::high ? mp.gamma_park_high : 0.0);
      expected = mp.c + mp.beta_trav_min * (leg.t_ivt_min + leg.t_wait_min) +
                 mp.beta_dist_km * leg.dist_km +
                 params.beta_money_per_eur * leg.monetary_cost_eur + nu + gamma;
    }
    REQUIRE(std::abs(score_leg(leg, params, {1, 1, 1}) - expected) <= 1e-12);
  }
}

TEST_CASE("robotaxi leg score never rises with k_ut or k_wt (negative C and beta)") {
  auto params = ScoringParams::defaults();
  LegRecord leg;
  leg.mode = Mode::robotaxi;
  leg.spc = Spc::Employed;
  leg.t_ivt_min = 12.0;
  leg.t_wait_min = 3.0;
  double prev = score_leg(leg, params, {0.8, 1.0, 1.0});
  for (double k : {0.9, 1.0, 1.1, 1.3}) {
    double cur = score_leg(leg, params, {k, 1.0, 1.0});
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  prev = score_leg(leg, params, {1.0, 1.0, 0.8});
  for (double k : {0.9, 1.0, 1.1, 1.3}) {
    double cur = score_leg(leg, params, {1.0, 1.0, k});
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("table 1 defaults round trip through csv at 4 decimals") {
  auto params = ScoringParams::defaults();
  auto path = std::filesystem::temp_directory_path() / "rtsim_scoring_roundtrip.csv";
  params.write_csv(path);
  auto loaded = ScoringParams::load_csv(path);
  int cells = 0;
  for (Spc spc : kAllSpc) {
    for (Mode mode : {Mode::car, Mode::pt, Mode::walk}) {
      const ModeParams& a = params.at(spc, mode);
      const ModeParams& b = loaded.at(spc, mode);
      auto eq = [&](double x, double y) { REQUIRE(x == y); ++cells; };
      eq(a.c, b.c);
      eq(a.beta_trav_min, b.beta_trav_min);
      if (mode == Mode::car) eq(a.beta_dist_km, b.beta_dist_km);
      if (mode != Mode::walk) {
        eq(a.nu_car1, b.nu_car1);
        eq(a.nu_car2plus, b.nu_car2plus);
        eq(a.gamma_park_med, b.gamma_park_med);
        eq(a.gamma_park_high, b.gamma_park_high);
      }
    }
  }
  CHECK(cells == 90);
  CHECK(loaded.wait_multiplier == 10.0);
  CHECK(loaded.pt_fare_eur == doctest::Approx(1.43));
  std::filesystem::remove(path);
}

TEST_CASE("activity score zero at zero-utility duration") {
  auto ap = ActivityScoringParams::defaults();
  // durations are integer seconds; t_typ/e is not, so exact zero holds only
  // to the one-second truncation (d/dt = beta*t_typ/t0 per second here)
  const auto t0 = static_cast<std::int64_t>(ap.at(ActivityType::Shopping).zero_utility_dur_sec);
  CHECK(std::abs(score_activity(ActivityType::Shopping, t0, hms(10), ap)) < 0.01);
  // with an integer-representable zero-utility duration the score is exact
  ActivityScoringParams exact = ap;
  exact.at(ActivityType::Shopping).zero_utility_dur_sec = 1200.0;
  CHECK(score_activity(ActivityType::Shopping, 1200, hms(10), exact) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("work at typical duration earns beta_perf * t_typ") {
  auto ap = ActivityScoringParams::defaults();
  // ln(t_typ / (t_typ/e)) = 1
  const double s = score_activity(ActivityType::Work, 8 * 3600, hms(8), ap);
  CHECK(s == doctest::Approx(48.0).epsilon(1e-9));
}

TEST_CASE("lateness penalty starts exactly after the latest start") {
  auto ap = ActivityScoringParams::defaults();
  const double on_time = score_activity(ActivityType::Work, 8 * 3600, hms(9), ap);
  CHECK(on_time == doctest::Approx(48.0).epsilon(1e-9));
  const double late = score_activity(ActivityType::Work, 8 * 3600, hms(10), ap);
  CHECK(late == doctest::Approx(48.0 - 18.0).epsilon(1e-9));
}

namespace {
DailyPlan executed_walk_plan() {
  DailyPlan plan;
  auto t0_home = static_cast<std::int64_t>(
      ActivityScoringParams::defaults().at(ActivityType::Home).zero_utility_dur_sec);
  Activity h1{ActivityType::Home, 1, 28800, 0, 14400};
  Activity h2{ActivityType::Home, 1, -1, 15300, 15300 + t0_home - 14400};
  plan.activities = {h1, h2};
  Leg leg;
  leg.mode = Mode::walk;
  leg.dep_sec = 14400;
  leg.arr_sec = 15300;  // 15 minutes
  plan.legs = {leg};
  return plan;
}
}  // namespace

TEST_CASE("plan score sums components; wrapped home counted once") {
  auto params = ScoringParams::defaults();
  auto ap = ActivityScoringParams::defaults();
  PlanScoringContext ctx;
  ctx.spc = Spc::Employed;
  auto plan = executed_walk_plan();
  // merged home duration equals the zero-utility duration up to one second
  const double s = score_plan(plan, params, ap, {1, 1, 1}, ctx);
  CHECK(s == doctest::Approx(-12.2055).epsilon(2e-4));
  // and the leg component alone is exact
  LegRecord walk;
  walk.mode = Mode::walk;
  walk.spc = Spc::Employed;
  walk.t_ivt_min = 15.0;
  CHECK(score_leg(walk, params, {1, 1, 1}) == doctest::Approx(-12.2055).epsilon(1e-12));
}

TEST_CASE("single activity plan at zero-utility duration scores zero") {
  auto params = ScoringParams::defaults();
  auto ap = ActivityScoringParams::defaults();
  auto t0 = static_cast<std::int64_t>(ap.at(ActivityType::Home).zero_utility_dur_sec);
  DailyPlan plan;
  plan.activities.push_back({ActivityType::Home, 1, -1, 0, t0});
  CHECK(std::abs(score_plan(plan, params, ap, {1, 1, 1}, {})) < 0.01);
}

TEST_CASE("doubling in-vehicle times strictly lowers the plan score") {
  auto params = ScoringParams::defaults();
  auto ap = ActivityScoringParams::defaults();
  PlanScoringContext ctx;
  ctx.spc = Spc::Employed;
  auto plan = executed_walk_plan();
  const double s1 = score_plan(plan, params, ap, {1, 1, 1}, ctx);
  plan.legs[0].arr_sec = plan.legs[0].dep_sec + 1800;  // double the walk
  plan.activities[1].realized_start_sec += 900;
  plan.activities[1].realized_end_sec += 900;
  const double s2 = score_plan(plan, params, ap, {1, 1, 1}, ctx);
  CHECK(s2 < s1);
}

TEST_CASE("stuck and rejected legs take the penalty") {
  auto params = ScoringParams::defaults();
  auto ap = ActivityScoringParams::defaults();
  PlanScoringContext ctx;
  ctx.spc = Spc::Employed;
  auto plan = executed_walk_plan();
  const double clean = score_plan(plan, params, ap, {1, 1, 1}, ctx);
  plan.legs[0].stuck = true;
  CHECK(score_plan(plan, params, ap, {1, 1, 1}, ctx) ==
        doctest::Approx(clean - 100.0).epsilon(1e-9));
}

TEST_CASE("unexecuted plan is rejected") {
  auto params = ScoringParams::defaults();
  auto ap = ActivityScoringParams::defaults();
  DailyPlan plan;
  plan.activities.push_back({ActivityType::Home, 1, 100, -1, -1});
  CHECK_THROWS_AS(score_plan(plan, params, ap, {1, 1, 1}, {}), DataError);
}

TEST_CASE("rejected robotaxi leg scores as walk plus penalty") {
  auto params = ScoringParams::defaults();
  auto ap = ActivityScoringParams::defaults();
  PlanScoringContext ctx;
  ctx.spc = Spc::Employed;
  auto plan = executed_walk_plan();
  const double walk_score = score_plan(plan, params, ap, {1, 1, 1}, ctx);
  plan.legs[0].mode = Mode::robotaxi;
  plan.legs[0].rejected = true;
  CHECK(score_plan(plan, params, ap, {1, 1, 1}, ctx) ==
        doctest::Approx(walk_score - 100.0).epsilon(1e-9));
}

TEST_CASE("shipped defaults file loads and matches builtins") {
  auto path = std::filesystem::path(RTSIM_DATA_DIR) / "scoring_params.csv";
  auto loaded = ScoringParams::load_csv(path);
  auto builtin = ScoringParams::defaults();
  for (Spc spc : kAllSpc)
    for (Mode mode : kAllModes) {
      CHECK(loaded.at(spc, mode).c == builtin.at(spc, mode).c);
      CHECK(loaded.at(spc, mode).beta_trav_min == builtin.at(spc, mode).beta_trav_min);
    }
}
