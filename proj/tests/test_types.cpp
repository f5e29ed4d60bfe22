#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtsim/types.hpp"

using namespace rtsim;

TEST_CASE("enum string round trips") {
  for (Spc s : kAllSpc) CHECK(spc_from_string(to_string(s)) == s);
  for (Mode m : kAllModes) CHECK(mode_from_string(to_string(m)) == m);
  for (ActivityType t : kAllActivityTypes) {
    CHECK(activity_type_from_string(to_string(t)) == t);
    CHECK(activity_from_letter(activity_letter(t)) == t);
  }
  CHECK_THROWS_AS(spc_from_string("Worker"), DataError);
  CHECK_THROWS_AS(mode_from_string("bike"), DataError);
}

namespace {
Population two_person_population() {
  Population pop;
  Household hh;
  hh.household_id = 1;
  hh.zone_id = 10;
  hh.income_eur = 25000;
  hh.cars = 1;
  hh.member_ids = {1, 2};
  pop.households.push_back(hh);
  pop.persons.push_back({1, 1, 40, Sex::female, Spc::Employed, 10});
  pop.persons.push_back({2, 1, 8, Sex::male, Spc::Under14, 10});
  pop.rebuild_index();
  return pop;
}
}  // namespace

TEST_CASE("population validation accepts a consistent population") {
  auto pop = two_person_population();
  CHECK_NOTHROW(pop.validate());
}

TEST_CASE("under14 category must match age") {
  auto pop = two_person_population();
  pop.persons[1].age = 20;  // still Under14 spc
  CHECK_THROWS_AS(pop.validate(), DataError);
  pop.persons[1].age = 8;
  pop.persons[0].spc = Spc::Under14;  // employed-aged adult mislabelled
  CHECK_THROWS_AS(pop.validate(), DataError);
}

TEST_CASE("household invariants") {
  auto pop = two_person_population();
  pop.households[0].income_eur = 0.0;
  CHECK_THROWS_AS(pop.validate(), DataError);
  pop = two_person_population();
  pop.persons[1].zone_id = 99;
  CHECK_THROWS_AS(pop.validate(), DataError);
}

TEST_CASE("population csv round trip") {
  auto pop = two_person_population();
  auto dir = std::filesystem::temp_directory_path();
  pop.write_csv(dir / "hh.csv", dir / "pp.csv");
  auto loaded = Population::load_csv(dir / "hh.csv", dir / "pp.csv");
  REQUIRE(loaded.households.size() == 1);
  REQUIRE(loaded.persons.size() == 2);
  CHECK(loaded.household(1).cars == 1);
  CHECK(loaded.person(2).spc == Spc::Under14);
  CHECK(loaded.person(2).zone_id == 10);
  std::filesystem::remove(dir / "hh.csv");
  std::filesystem::remove(dir / "pp.csv");
}

TEST_CASE("plan validation") {
  DailyPlan plan;
  CHECK_THROWS_AS(plan.validate(), DataError);  // empty

  plan.activities.push_back({ActivityType::Home, 1, 28800, -1, -1});
  plan.activities.push_back({ActivityType::Work, 2, 57600, -1, -1});
  plan.activities.push_back({ActivityType::Home, 1, -1, -1, -1});
  plan.legs.push_back({});
  CHECK_THROWS_AS(plan.validate(), DataError);  // leg count mismatch
  plan.legs.push_back({});
  CHECK_NOTHROW(plan.validate());

  plan.activities[1].planned_end_sec = 28800;  // not strictly increasing
  CHECK_THROWS_AS(plan.validate(), DataError);
}

TEST_CASE("clear_realization keeps the score") {
  DailyPlan plan;
  plan.activities.push_back({ActivityType::Home, 1, -1, 0, 86400});
  plan.score = 12.5;
  plan.clear_realization();
  CHECK(plan.score.has_value());
  CHECK(plan.activities[0].realized_start_sec == -1);
}
