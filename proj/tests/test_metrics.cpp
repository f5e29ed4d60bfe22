#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rtsim/metrics.hpp"
#include "rtsim/rng.hpp"

using namespace rtsim;
using namespace rtsim::metrics;

namespace {

mobsim::EventLog arrivals(std::initializer_list<const char*> modes) {
  mobsim::EventLog log;
  std::int64_t t = 0;
  Id person = 1;
  for (const char* m : modes)
    log.append({t += 10, mobsim::EventType::arrival, person++, -1, 1, m});
  return log;
}

fleet::Request served(Id req, Id person, std::int64_t submit, std::int64_t pickup) {
  fleet::Request r;
  r.request_id = req;
  r.person_id = person;
  r.submission_sec = submit;
  r.pickup_sec = pickup;
  r.dropoff_sec = pickup + 300;
  return r;
}

}  // namespace

TEST_CASE("modal split: all car") {
  auto shares = modal_split(arrivals({"car", "car", "car"}));
  REQUIRE(shares.size() == 1);
  CHECK(shares[Mode::car] == 1.0);
}

TEST_CASE("modal split: 3 car 1 walk") {
  auto shares = modal_split(arrivals({"car", "walk", "car", "car"}));
  CHECK(shares[Mode::car] == doctest::Approx(0.75));
  CHECK(shares[Mode::walk] == doctest::Approx(0.25));
}

TEST_CASE("modal split: stuck arrivals drop out, shares still sum to one") {
  auto shares = modal_split(arrivals({"car", "car:stuck", "walk", "pt"}));
  double total = 0;
  for (const auto& [m, s] : shares) total += s;
  CHECK(total == doctest::Approx(1.0));
  CHECK(shares[Mode::car] == doctest::Approx(1.0 / 3));
}

TEST_CASE("modal split: empty log yields empty result") {
  mobsim::EventLog log;
  CHECK(modal_split(log).empty());
}

TEST_CASE("waiting stats: single request") {
  auto s = waiting_stats({served(0, 1, 100, 220)});
  CHECK(s.served == 1);
  CHECK(s.mean_sec == doctest::Approx(120.0));
  CHECK(s.p50_sec == doctest::Approx(120.0));
}

TEST_CASE("waiting stats: 60/120/180 mean and median 120") {
  auto s = waiting_stats(
      {served(0, 1, 0, 60), served(1, 2, 0, 120), served(2, 3, 0, 180)});
  CHECK(s.served == 3);
  CHECK(s.mean_sec == doctest::Approx(120.0));
  CHECK(s.p50_sec == doctest::Approx(120.0));
  CHECK(s.p90_sec == doctest::Approx(180.0));
}

TEST_CASE("waiting stats: all rejected leaves null stats") {
  fleet::Request r;
  r.request_id = 0;
  r.person_id = 1;
  r.submission_sec = 10;
  r.rejected = true;
  auto s = waiting_stats({r});
  CHECK(s.served == 0);
  CHECK(s.rejected == 1);
  CHECK_FALSE(s.has_stats());
}

namespace {
Population small_population() {
  Population pop;
  auto add = [&pop](Id pid, Spc spc) {
    Household hh;
    hh.household_id = pid;
    hh.zone_id = 1;
    hh.income_eur = 20000;
    hh.cars = 1;
    hh.member_ids = {pid};
    pop.households.push_back(hh);
    Person p;
    p.person_id = pid;
    p.household_id = pid;
    p.age = spc == Spc::Under14 ? 10 : 40;
    p.spc = spc;
    p.zone_id = 1;
    pop.persons.push_back(p);
  };
  add(1, Spc::Employed);
  add(2, Spc::Employed);
  add(3, Spc::Retired);
  add(4, Spc::Under14);
  pop.rebuild_index();
  return pop;
}
}  // namespace

TEST_CASE("usage by spc counts distinct persons once") {
  auto pop = small_population();
  std::vector<fleet::Request> reqs = {served(0, 1, 0, 100), served(1, 1, 500, 700),
                                      served(2, 1, 900, 1000), served(3, 3, 0, 50)};
  auto counts = usage_by_spc(reqs, pop);
  CHECK(counts[static_cast<int>(Spc::Employed)] == 1);
  CHECK(counts[static_cast<int>(Spc::Retired)] == 1);
  CHECK(counts[static_cast<int>(Spc::Under14)] == 0);
}

TEST_CASE("usage by spc: no robotaxi trips means all zeros") {
  auto pop = small_population();
  auto counts = usage_by_spc({}, pop);
  for (int s = 0; s < kNumSpc; ++s) CHECK(counts[s] == 0);
}

TEST_CASE("usage by spc matches an independent set-based count") {
  auto pop = small_population();
  std::vector<fleet::Request> reqs;
  Rng rng_like = Rng(1);
  std::int64_t t = 0;
  for (int i = 0; i < 100; ++i) {
    Id person = 1 + static_cast<Id>(rng_like.uniform_int(4));
    reqs.push_back(served(i, person, t, t + 60));
    t += 100;
  }
  auto counts = usage_by_spc(reqs, pop);
  // oracle: sets of persons per category
  std::array<std::set<Id>, kNumSpc> sets;
  for (const auto& r : reqs)
    sets[static_cast<int>(pop.person(r.person_id).spc)].insert(r.person_id);
  for (int s = 0; s < kNumSpc; ++s)
    CHECK(counts[s] == static_cast<std::int64_t>(sets[s].size()));
  std::int64_t total = 0;
  for (int s = 0; s < kNumSpc; ++s) total += counts[s];
  CHECK(total <= static_cast<std::int64_t>(pop.persons.size()));
}

TEST_CASE("usage by spc: unknown person id is a data error") {
  auto pop = small_population();
  CHECK_THROWS_AS(usage_by_spc({served(0, 99, 0, 10)}, pop), DataError);
}

TEST_CASE("comparison report: identical bundles change by zero") {
  KpiBundle k;
  k.modal_shares[Mode::car] = 0.6;
  k.waiting.mean_sec = 100;
  k.rt_users_by_spc[0] = 5;
  auto rows = comparison_report(k, k);
  for (const auto& r : rows) CHECK(r.change == 0.0);
}

TEST_CASE("comparison report: 130 vs 100 seconds is +30 percent") {
  KpiBundle a, b;
  a.waiting.mean_sec = 130;
  b.waiting.mean_sec = 100;
  auto rows = comparison_report(a, b);
  bool found = false;
  for (const auto& r : rows)
    if (r.kpi == "mean_wait_sec") {
      found = true;
      CHECK_FALSE(r.absolute);
      CHECK(r.change == doctest::Approx(0.30));
    }
  CHECK(found);
}

TEST_CASE("comparison report: zero baseline flips to absolute difference") {
  KpiBundle a, b;
  a.modal_shares[Mode::robotaxi] = 0.02;
  auto rows = comparison_report(a, b);
  for (const auto& r : rows)
    if (r.kpi == "modal_share_robotaxi") {
      CHECK(r.absolute);
      CHECK(r.change == doctest::Approx(0.02));
    }
}

TEST_CASE("kpi bundle invariants on a synthetic task log") {
  fleet::TaskLog log;
  log.push_back({1, fleet::TaskType::Stay, 0, 8 * 3600, -1, -1, 0});
  log.push_back({1, fleet::TaskType::OccupiedDrive, 8 * 3600, 9 * 3600, -1, -1, 12});
  log.push_back({1, fleet::TaskType::Stay, 9 * 3600, 24 * 3600, -1, -1, 0});
  auto rates = fleet::compute_in_service_rates(log, 3600, 24 * 3600);
  for (double r : rates) {
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
  CHECK(rates[8] == doctest::Approx(1.0));
  CHECK(rates[7] == doctest::Approx(0.0));
}
