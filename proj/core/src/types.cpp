#include "rtsim/types.hpp"

#include <algorithm>

#include "rtsim/csv.hpp"

namespace rtsim {

namespace {
const std::array<std::string, 2> kSexNames = {"female", "male"};
const std::array<std::string, kNumSpc> kSpcNames = {"Employed",      "Unemployed",
                                                    "Retired",       "Student14Plus",
                                                    "Under14",       "Homemaker"};
const std::array<std::string, kNumModes> kModeNames = {"car", "pt", "walk", "robotaxi"};
const std::array<std::string, kNumActivityTypes> kActNames = {
    "Home", "Work", "OtherWork", "Study", "Shopping", "LeisureVisit", "Errands", "Escort"};
const std::array<char, kNumActivityTypes> kActLetters = {'H', 'W', 'O', 'S',
                                                         'C', 'L', 'E', 'X'};
}  // namespace

const std::string& to_string(Sex s) { return kSexNames[static_cast<int>(s)]; }
const std::string& to_string(Spc s) { return kSpcNames[static_cast<int>(s)]; }
const std::string& to_string(Mode m) { return kModeNames[static_cast<int>(m)]; }
const std::string& to_string(ActivityType t) { return kActNames[static_cast<int>(t)]; }

Sex sex_from_string(const std::string& s) {
  for (std::size_t i = 0; i < kSexNames.size(); ++i)
    if (kSexNames[i] == s) return static_cast<Sex>(i);
  throw DataError("unknown sex: '" + s + "'");
}

Spc spc_from_string(const std::string& s) {
  for (std::size_t i = 0; i < kSpcNames.size(); ++i)
    if (kSpcNames[i] == s) return static_cast<Spc>(i);
  throw DataError("unknown spc: '" + s + "'");
}

Mode mode_from_string(const std::string& s) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (kModeNames[i] == s) return static_cast<Mode>(i);
  throw DataError("unknown mode: '" + s + "'");
}

ActivityType activity_type_from_string(const std::string& s) {
  for (std::size_t i = 0; i < kActNames.size(); ++i)
    if (kActNames[i] == s) return static_cast<ActivityType>(i);
  throw DataError("unknown activity type: '" + s + "'");
}

char activity_letter(ActivityType t) { return kActLetters[static_cast<int>(t)]; }

ActivityType activity_from_letter(char c) {
  for (std::size_t i = 0; i < kActLetters.size(); ++i)
    if (kActLetters[i] == c) return static_cast<ActivityType>(i);
  throw DataError(std::string("unknown activity letter: '") + c + "'");
}

const Household& Population::household(Id id) const {
  auto it = hh_index_.find(id);
  if (it == hh_index_.end()) throw DataError("unknown household id " + std::to_string(id));
  return households[it->second];
}

const Person& Population::person(Id id) const {
  auto it = person_index_.find(id);
  if (it == person_index_.end()) throw DataError("unknown person id " + std::to_string(id));
  return persons[it->second];
}

void Population::rebuild_index() {
  hh_index_.clear();
  person_index_.clear();
  for (std::size_t i = 0; i < households.size(); ++i) {
    if (!hh_index_.emplace(households[i].household_id, i).second)
      throw DataError("duplicate household id " + std::to_string(households[i].household_id));
  }
  for (std::size_t i = 0; i < persons.size(); ++i) {
    if (!person_index_.emplace(persons[i].person_id, i).second)
      throw DataError("duplicate person id " + std::to_string(persons[i].person_id));
  }
}

void Population::validate() const {
  for (const auto& hh : households) {
    if (hh.member_ids.empty())
      throw DataError("household " + std::to_string(hh.household_id) + " has no members");
    if (hh.income_eur <= 0.0)
      throw DataError("household " + std::to_string(hh.household_id) +
                      " has non-positive income");
    if (hh.cars < 0)
      throw DataError("household " + std::to_string(hh.household_id) + " has negative cars");
    for (Id pid : hh.member_ids) {
      const Person& p = person(pid);
      if (p.household_id != hh.household_id)
        throw DataError("person " + std::to_string(pid) + " membership mismatch");
      if (p.zone_id != hh.zone_id)
        throw DataError("person " + std::to_string(pid) + " not in household home zone");
    }
  }
  for (const auto& p : persons) {
    if (p.age < 0) throw DataError("person " + std::to_string(p.person_id) + " age < 0");
    if ((p.spc == Spc::Under14) != (p.age < 14))
      throw DataError("person " + std::to_string(p.person_id) +
                      ": Under14 category inconsistent with age " + std::to_string(p.age));
    household(p.household_id);
  }
}

void Population::write_csv(const std::filesystem::path& households_path,
                           const std::filesystem::path& persons_path) const {
  csv::Writer hw(households_path);
  hw.field(std::string("householdId")).field("zoneId").field("incomeEur").field("cars");
  hw.end_row();
  for (const auto& hh : households) {
    hw.field(hh.household_id).field(hh.zone_id).field(hh.income_eur).field(
        static_cast<std::int64_t>(hh.cars));
    hw.end_row();
  }
  hw.close();

  csv::Writer pw(persons_path);
  pw.field(std::string("personId")).field("householdId").field("age").field("sex").field("spc");
  pw.end_row();
  for (const auto& p : persons) {
    pw.field(p.person_id)
        .field(p.household_id)
        .field(static_cast<std::int64_t>(p.age))
        .field(to_string(p.sex))
        .field(to_string(p.spc));
    pw.end_row();
  }
  pw.close();
}

Population Population::load_csv(const std::filesystem::path& households_path,
                                const std::filesystem::path& persons_path) {
  Population pop;
  auto ht = csv::read_file(households_path);
  const bool has_zone = ht.has_column("zoneId");
  std::size_t c_hid = ht.column("householdId");
  std::size_t c_inc = ht.column("incomeEur");
  std::size_t c_cars = ht.column("cars");
  for (const auto& r : ht.rows) {
    Household hh;
    hh.household_id = csv::to_i64(r[c_hid], households_path.string());
    hh.zone_id = has_zone ? csv::to_i64(r[ht.column("zoneId")], households_path.string()) : -1;
    hh.income_eur = csv::to_double(r[c_inc], households_path.string());
    hh.cars = static_cast<int>(csv::to_i64(r[c_cars], households_path.string()));
    pop.households.push_back(std::move(hh));
  }

  auto pt = csv::read_file(persons_path);
  std::size_t c_pid = pt.column("personId");
  std::size_t c_phh = pt.column("householdId");
  std::size_t c_age = pt.column("age");
  std::size_t c_sex = pt.column("sex");
  std::size_t c_spc = pt.column("spc");
  pop.rebuild_index();
  for (const auto& r : pt.rows) {
    Person p;
    p.person_id = csv::to_i64(r[c_pid], persons_path.string());
    p.household_id = csv::to_i64(r[c_phh], persons_path.string());
    p.age = static_cast<int>(csv::to_i64(r[c_age], persons_path.string()));
    p.sex = sex_from_string(r[c_sex]);
    p.spc = spc_from_string(r[c_spc]);
    p.zone_id = pop.household(p.household_id).zone_id;
    pop.persons.push_back(p);
  }
  // membership lists follow person file order
  std::unordered_map<Id, std::vector<Id>> members;
  for (const auto& p : pop.persons) members[p.household_id].push_back(p.person_id);
  for (auto& hh : pop.households) hh.member_ids = std::move(members[hh.household_id]);
  pop.rebuild_index();
  return pop;
}

bool DailyPlan::executed() const {
  for (const auto& leg : legs)
    if (leg.dep_sec < 0 || leg.arr_sec < 0) return false;
  for (const auto& act : activities)
    if (act.realized_start_sec < 0 || act.realized_end_sec < 0) return false;
  return true;
}

void DailyPlan::clear_realization() {
  // realization only; the memorized score survives re-execution
  for (auto& act : activities) {
    act.realized_start_sec = -1;
    act.realized_end_sec = -1;
  }
  for (auto& leg : legs) {
    leg.dep_sec = -1;
    leg.arr_sec = -1;
    leg.wait_sec = 0;
    leg.dist_km = 0.0;
    leg.cost_eur = 0.0;
    leg.stuck = false;
    leg.rejected = false;
  }
}

void DailyPlan::validate() const {
  if (activities.empty()) throw DataError("plan has no activities");
  if (legs.size() + 1 != activities.size())
    throw DataError("plan alternation broken: " + std::to_string(activities.size()) +
                    " activities, " + std::to_string(legs.size()) + " legs");
  for (std::size_t i = 0; i + 1 < activities.size(); ++i) {
    if (activities[i].planned_end_sec < 0)
      throw DataError("non-final activity without planned end time");
    if (i > 0 && activities[i].planned_end_sec <= activities[i - 1].planned_end_sec)
      throw DataError("planned end times not strictly increasing");
  }
}

std::int64_t hms(int h, int m, int s) { return std::int64_t(h) * 3600 + m * 60 + s; }

}  // namespace rtsim
