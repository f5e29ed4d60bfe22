#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rtsim/errors.hpp"

namespace rtsim {

using Id = std::int64_t;

enum class Sex : std::uint8_t { female, male };

// Socio-professional category; indexes every categorized parameter set.
enum class Spc : std::uint8_t {
  Employed,
  Unemployed,
  Retired,
  Student14Plus,
  Under14,
  Homemaker
};
inline constexpr int kNumSpc = 6;
inline constexpr std::array<Spc, kNumSpc> kAllSpc = {
    Spc::Employed,   Spc::Unemployed, Spc::Retired,
    Spc::Student14Plus, Spc::Under14, Spc::Homemaker};

enum class Mode : std::uint8_t { car, pt, walk, robotaxi };
inline constexpr int kNumModes = 4;
inline constexpr std::array<Mode, kNumModes> kAllModes = {Mode::car, Mode::pt, Mode::walk,
                                                          Mode::robotaxi};

enum class ActivityType : std::uint8_t {
  Home,
  Work,
  OtherWork,
  Study,
  Shopping,
  LeisureVisit,
  Errands,
  Escort
};
inline constexpr int kNumActivityTypes = 8;
inline constexpr std::array<ActivityType, kNumActivityTypes> kAllActivityTypes = {
    ActivityType::Home,     ActivityType::Work,    ActivityType::OtherWork,
    ActivityType::Study,    ActivityType::Shopping, ActivityType::LeisureVisit,
    ActivityType::Errands,  ActivityType::Escort};

enum class ParkingLevel : std::uint8_t { low, medium, high };

const std::string& to_string(Sex s);
const std::string& to_string(Spc s);
const std::string& to_string(Mode m);
const std::string& to_string(ActivityType t);
Sex sex_from_string(const std::string& s);
Spc spc_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);
ActivityType activity_type_from_string(const std::string& s);

// Single-letter chain encoding, e.g. "H-W-H".
char activity_letter(ActivityType t);
ActivityType activity_from_letter(char c);

struct Person {
  Id person_id = -1;
  Id household_id = -1;
  int age = 0;
  Sex sex = Sex::female;
  Spc spc = Spc::Employed;
  Id zone_id = -1;  // home zone
};

struct Household {
  Id household_id = -1;
  Id zone_id = -1;
  double income_eur = 0.0;
  int cars = 0;
  std::vector<Id> member_ids;
};

struct Population {
  std::vector<Household> households;
  std::vector<Person> persons;

  const Household& household(Id id) const;
  const Person& person(Id id) const;
  void rebuild_index();
  // Enforces structural invariants: membership, age/spc consistency,
  // positive income, shared home zone. Throws DataError on violation.
  void validate() const;

  void write_csv(const std::filesystem::path& households_path,
                 const std::filesystem::path& persons_path) const;
  static Population load_csv(const std::filesystem::path& households_path,
                             const std::filesystem::path& persons_path);

private:
  std::unordered_map<Id, std::size_t> hh_index_;
  std::unordered_map<Id, std::size_t> person_index_;
};

// ---- daily plans ----

struct Activity {
  ActivityType type = ActivityType::Home;
  Id facility_id = -1;
  std::int64_t planned_end_sec = -1;  // -1 on the final, open-ended activity
  // realized on execution
  std::int64_t realized_start_sec = -1;
  std::int64_t realized_end_sec = -1;
};

struct Leg {
  Mode mode = Mode::walk;
  // realized on execution
  std::int64_t dep_sec = -1;
  std::int64_t arr_sec = -1;
  std::int64_t wait_sec = 0;  // robotaxi only: submission to pickup
  double dist_km = 0.0;
  double cost_eur = 0.0;
  bool stuck = false;
  bool rejected = false;  // robotaxi request rejected; realized as walk
};

// Alternating activity/leg sequence; activities.size() == legs.size() + 1.
struct DailyPlan {
  std::vector<Activity> activities;
  std::vector<Leg> legs;
  std::optional<double> score;

  bool executed() const;
  void clear_realization();
  // Alternation, monotone planned end times, leg count. Throws DataError.
  void validate() const;
};

std::int64_t hms(int h, int m = 0, int s = 0);

}  // namespace rtsim
