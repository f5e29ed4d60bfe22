#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "rtsim/activitygen.hpp"

using namespace rtsim;
using namespace rtsim::activitygen;

namespace {

Person person_of(Spc spc, int age = 30) {
  Person p;
  p.person_id = 1;
  p.household_id = 1;
  p.age = age;
  p.sex = Sex::female;
  p.spc = spc;
  p.zone_id = 1;
  return p;
}

FacilitySet two_shops(double size_a, double size_b, double xa, double xb) {
  FacilitySet fs;
  Facility a;
  a.facility_id = 1;
  a.zone_id = 1;
  a.x = xa;
  a.y = 0;
  a.types = {ActivityType::Shopping};
  a.size = size_a;
  Facility b = a;
  b.facility_id = 2;
  b.x = xb;
  b.size = size_b;
  fs.facilities = {a, b};
  fs.build_index();
  return fs;
}

}  // namespace

TEST_CASE("chain string codec") {
  auto chain = chain_from_string("H-W-C-H");
  REQUIRE(chain.size() == 4);
  CHECK(chain[1] == ActivityType::Work);
  CHECK(chain[2] == ActivityType::Shopping);
  CHECK(chain_to_string(chain) == "H-W-C-H");
  CHECK(chain_from_string("H").size() == 1);
  CHECK_THROWS_AS(chain_from_string("W-H"), DataError);   // must start at home
  CHECK_THROWS_AS(chain_from_string("H-W"), DataError);   // must end at home
  CHECK_THROWS_AS(chain_from_string("H-Q-H"), DataError); // unknown letter
}

TEST_CASE("point-mass chain row always returns that chain") {
  ChainFrequencyTable t;
  t.rows[static_cast<int>(Spc::Employed)] = {{chain_from_string("H-W-H"), 1.0}};
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    auto c = assign_activity_chain(person_of(Spc::Employed), t, rng);
    CHECK(chain_to_string(c) == "H-W-H");
  }
}

TEST_CASE("missing spc row is a configuration error") {
  ChainFrequencyTable t;
  Rng rng(1);
  CHECK_THROWS_AS(assign_activity_chain(person_of(Spc::Retired), t, rng), ConfigError);
}

TEST_CASE("two-chain row concentrates at the configured split") {
  ChainFrequencyTable t;
  t.rows[static_cast<int>(Spc::Employed)] = {{chain_from_string("H"), 0.5},
                                             {chain_from_string("H-C-H"), 0.5}};
  Rng rng(42);
  int stay = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (assign_activity_chain(person_of(Spc::Employed), t, rng).size() == 1) ++stay;
  CHECK(std::abs(stay / double(n) - 0.5) < 0.02);
}

TEST_CASE("study marginal matches the row frequency for under-14 rows") {
  ChainFrequencyTable t;
  t.rows[static_cast<int>(Spc::Under14)] = {{chain_from_string("H-S-H"), 0.7},
                                            {chain_from_string("H"), 0.3}};
  Rng rng(7);
  int with_study = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto c = assign_activity_chain(person_of(Spc::Under14, 9), t, rng);
    for (auto a : c)
      if (a == ActivityType::Study) {
        ++with_study;
        break;
      }
  }
  CHECK(std::abs(with_study / double(n) - 0.7) < 0.02);
}

TEST_CASE("chain frequencies must sum to one") {
  ChainFrequencyTable t;
  t.rows[0] = {{chain_from_string("H"), 0.6}, {chain_from_string("H-W-H"), 0.3}};
  CHECK_THROWS_AS(t.validate(), DataError);
}

TEST_CASE("destination zone: single destination, home anchoring, missing row") {
  OdModel od;
  od.rows[{1, static_cast<int>(ActivityType::Shopping)}] = {{5, 1.0}};
  Rng rng(1);
  CHECK(choose_destination_zone(1, ActivityType::Shopping, od, rng, 1) == 5);
  // home ignores the model entirely
  CHECK(choose_destination_zone(1, ActivityType::Home, od, rng, 9) == 9);
  CHECK_THROWS_AS(choose_destination_zone(2, ActivityType::Shopping, od, rng, 1),
                  ConfigError);
}

TEST_CASE("uniform od row spreads evenly") {
  OdModel od;
  od.rows[{1, static_cast<int>(ActivityType::Errands)}] = {
      {1, 0.25}, {2, 0.25}, {3, 0.25}, {4, 0.25}};
  Rng rng(11);
  std::map<Id, int> counts;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    counts[choose_destination_zone(1, ActivityType::Errands, od, rng, 1)]++;
  for (Id z = 1; z <= 4; ++z) CHECK(std::abs(counts[z] / double(n) - 0.25) < 0.02);
}

TEST_CASE("gravity: single facility chosen with probability one") {
  auto fs = two_shops(1.0, 1.0, 100, 200);
  fs.facilities.pop_back();
  fs.build_index();
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    auto c = choose_facility(1, ActivityType::Shopping, fs, 0, 0, 2000, rng);
    CHECK(c.facility_id == 1);
    CHECK_FALSE(c.fell_back);
  }
}

TEST_CASE("gravity: equal size and distance split 50/50") {
  auto fs = two_shops(1.0, 1.0, 500, -500);
  Rng rng(3);
  int first = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (choose_facility(1, ActivityType::Shopping, fs, 0, 0, 2000, rng).facility_id == 1)
      ++first;
  CHECK(std::abs(first / double(n) - 0.5) < 0.02);
}

TEST_CASE("gravity: sizes 2:1 at equal distance give 2/3 vs 1/3 exactly") {
  auto fs = two_shops(2.0, 1.0, 500, -500);
  Rng rng(5);
  int first = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (choose_facility(1, ActivityType::Shopping, fs, 0, 0, 2000, rng).facility_id == 1)
      ++first;
  CHECK(std::abs(first / double(n) - 2.0 / 3.0) < 0.02);
}

TEST_CASE("gravity falls back to the nearest facility in any zone") {
  auto fs = two_shops(1.0, 1.0, 5000, 9000);
  fs.facilities[0].zone_id = 2;
  fs.facilities[1].zone_id = 3;
  fs.build_index();
  Rng rng(9);
  auto c = choose_facility(1, ActivityType::Shopping, fs, 0, 0, 2000, rng);
  CHECK(c.fell_back);
  CHECK(c.facility_id == 1);  // nearer of the two
  CHECK_THROWS_AS(choose_facility(1, ActivityType::Study, fs, 0, 0, 2000, rng),
                  ConfigError);
}

TEST_CASE("empirical sampling stays in the bin and honors u=0") {
  EmpiricalDistribution d;
  d.bins = {{28800, 28860, 1.0}};
  d.validate();
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    auto v = sample_from_distribution(d, rng);
    CHECK(v >= 28800);
    CHECK(v < 28860);
  }
  CHECK(sample_from_distribution_at(d, 0.0, 0.0) == 28800);

  EmpiricalDistribution multi;
  multi.bins = {{0, 100, 1.0}, {100, 200, 0.0}, {200, 300, 3.0}};
  multi.validate();
  CHECK(sample_from_distribution_at(multi, 0.0, 0.0) == 0);        // support minimum
  CHECK(sample_from_distribution_at(multi, 0.9, 0.0) == 200);      // lands in heavy bin
  CHECK(sample_from_distribution_at(multi, 0.999, 0.999) < 300);
}

TEST_CASE("empirical distribution validation") {
  EmpiricalDistribution d;
  CHECK_THROWS_AS(d.validate(), DataError);  // empty
  d.bins = {{100, 100, 1.0}};
  CHECK_THROWS_AS(d.validate(), DataError);  // empty span
  d.bins = {{0, 100, 1.0}, {50, 150, 1.0}};
  CHECK_THROWS_AS(d.validate(), DataError);  // overlap
  d.bins = {{0, 100, 0.0}};
  CHECK_THROWS_AS(d.validate(), DataError);  // zero mass
}

namespace {
TimeModels small_models() {
  TimeModels t;
  for (int a = 0; a < kNumActivityTypes; ++a) {
    t.dists[a][0].bins = {{28800, 28801, 1.0}};  // start exactly 08:00
    t.dists[a][1].bins = {{14400, 14401, 1.0}};  // duration exactly 4 h
  }
  return t;
}

OdModel trivial_od() {
  OdModel od;
  for (ActivityType t : kAllActivityTypes) {
    if (t == ActivityType::Home) continue;
    od.rows[{1, static_cast<int>(t)}] = {{1, 1.0}};
  }
  return od;
}

FacilitySet full_zone_facilities() {
  FacilitySet fs;
  Id id = 1;
  for (ActivityType t : kAllActivityTypes) {
    Facility f;
    f.facility_id = id++;
    f.zone_id = 1;
    f.x = 100.0 * id;
    f.y = 0;
    f.types = {t};
    f.size = 1.0;
    fs.facilities.push_back(f);
  }
  fs.build_index();
  return fs;
}
}  // namespace

TEST_CASE("stay-at-home chain builds a single-activity plan") {
  auto od = trivial_od();
  auto fs = full_zone_facilities();
  auto tm = small_models();
  HomeAnchor home{1, 1, 0, 0};
  Rng rng(1);
  auto plan = build_initial_plan(person_of(Spc::Retired, 70), {ActivityType::Home}, od, fs,
                                 tm, home, 1, {}, rng);
  CHECK(plan.activities.size() == 1);
  CHECK(plan.legs.empty());
  CHECK(plan.activities[0].planned_end_sec == -1);
  CHECK(plan.activities[0].facility_id == 1);
}

TEST_CASE("H-W-H: first home ends at work start, work ends a duration later") {
  auto od = trivial_od();
  auto fs = full_zone_facilities();
  auto tm = small_models();
  HomeAnchor home{1, 1, 0, 0};
  Rng rng(2);
  auto chain = chain_from_string("H-W-H");
  auto plan = build_initial_plan(person_of(Spc::Employed), chain, od, fs, tm, home, 1, {},
                                 rng);
  REQUIRE(plan.activities.size() == 3);
  CHECK(plan.activities[0].planned_end_sec == 28800);
  CHECK(plan.activities[1].planned_end_sec == 28800 + 14400);
  CHECK(plan.activities[2].planned_end_sec == -1);
  CHECK(plan.legs.size() == 2);
  CHECK(plan.activities[0].facility_id == plan.activities[2].facility_id);
}

TEST_CASE("carless households never seed a car leg") {
  auto od = trivial_od();
  auto fs = full_zone_facilities();
  auto tm = small_models();
  HomeAnchor home{1, 1, 0, 0};
  Rng rng(3);
  auto chain = chain_from_string("H-W-C-H");
  for (int i = 0; i < 300; ++i) {
    auto plan = build_initial_plan(person_of(Spc::Employed), chain, od, fs, tm, home, 0, {},
                                   rng);
    for (const auto& leg : plan.legs) CHECK(leg.mode != Mode::car);
  }
}

TEST_CASE("generated plans always satisfy the plan invariants") {
  auto od = trivial_od();
  auto fs = full_zone_facilities();
  auto tm = small_models();
  HomeAnchor home{1, 1, 0, 0};
  Rng rng(4);
  for (const char* coded : {"H", "H-W-H", "H-W-C-H", "H-S-H-L-H", "H-X-C-H"}) {
    auto plan = build_initial_plan(person_of(Spc::Employed), chain_from_string(coded), od,
                                   fs, tm, home, 2, {}, rng);
    CHECK_NOTHROW(plan.validate());
  }
}

TEST_CASE("chains, facilities, od and time model csv round trips") {
  auto dir = std::filesystem::temp_directory_path();
  ChainFrequencyTable t;
  t.rows[static_cast<int>(Spc::Employed)] = {{chain_from_string("H-W-H"), 0.75},
                                             {chain_from_string("H"), 0.25}};
  t.write_csv(dir / "rtsim_chains.csv");
  auto t2 = ChainFrequencyTable::load_csv(dir / "rtsim_chains.csv");
  CHECK(t2.rows[static_cast<int>(Spc::Employed)].size() == 2);

  auto fs = full_zone_facilities();
  fs.write_csv(dir / "rtsim_fac.csv");
  auto fs2 = FacilitySet::load_csv(dir / "rtsim_fac.csv");
  CHECK(fs2.facilities.size() == fs.facilities.size());
  CHECK(fs2.by_id(3).types == fs.by_id(3).types);

  auto od = trivial_od();
  od.write_csv(dir / "rtsim_od.csv");
  auto od2 = OdModel::load_csv(dir / "rtsim_od.csv");
  CHECK(od2.rows.size() == od.rows.size());

  auto tm = small_models();
  tm.write_csv(dir / "rtsim_tm.csv");
  auto tm2 = TimeModels::load_csv(dir / "rtsim_tm.csv");
  CHECK(tm2.at(ActivityType::Work, TimeModelKind::startTime).bins.size() == 1);
  for (const char* f : {"rtsim_chains.csv", "rtsim_fac.csv", "rtsim_od.csv", "rtsim_tm.csv"})
    std::filesystem::remove(dir / f);
}
