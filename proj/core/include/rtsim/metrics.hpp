#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtsim/fleet.hpp"
#include "rtsim/mobsim.hpp"
#include "rtsim/types.hpp"

namespace rtsim::metrics {

struct WaitingStats {
  std::size_t served = 0;
  std::size_t rejected = 0;
  double mean_sec = 0.0;
  double p50_sec = 0.0;
  double p90_sec = 0.0;
  double p95_sec = 0.0;
  bool has_stats() const { return served > 0; }
};

struct KpiBundle {
  std::map<Mode, double> modal_shares;  // over completed trips
  WaitingStats waiting;
  std::vector<double> hourly_in_service;  // 24 bins
  double onboard_km_per_vehicle = 0.0;    // mean occupied-drive km
  std::array<std::int64_t, kNumSpc> rt_users_by_spc{};
  double peak_morning_rate = 0.0;  // hours 8-10
  double peak_evening_rate = 0.0;  // hours 17-19
  double off_peak_rate = 0.0;      // all other hours
  double mean_executed_score = 0.0;
  int iterations = 0;
  bool converged = false;
};

// share(m) = trips completed by mode m / total completed trips; stuck trips
// are excluded from the denominator.
std::map<Mode, double> modal_split(const mobsim::EventLog& log);

WaitingStats waiting_stats(const std::vector<fleet::Request>& requests);

// Distinct robotaxi users (served at least once) per category.
std::array<std::int64_t, kNumSpc> usage_by_spc(const std::vector<fleet::Request>& requests,
                                               const Population& pop);

KpiBundle compute_kpis(const mobsim::EventLog& log, const fleet::FleetState* fleet,
                       const Population& pop, std::int64_t day_end_sec,
                       bool in_service_occupied_only);

struct ComparisonRow {
  std::string kpi;
  double with_factors = 0.0;
  double without_factors = 0.0;
  double change = 0.0;        // relative unless absolute flag set
  bool absolute = false;      // baseline was 0; change holds the difference
};

// Per-KPI (A - B) / B with a zero-baseline guard, A = with factors.
std::vector<ComparisonRow> comparison_report(const KpiBundle& with_factors,
                                             const KpiBundle& without_factors);

void write_modal_split_csv(const std::filesystem::path& path,
                           const std::map<Mode, double>& shares);
void write_waiting_csv(const std::filesystem::path& path, const WaitingStats& stats);
// One row per fleet size, 24 hourly columns.
void write_in_service_hourly_csv(const std::filesystem::path& path,
                                 const std::vector<std::pair<int, std::vector<double>>>& rows);
void write_usage_by_spc_csv(const std::filesystem::path& path,
                            const std::array<std::int64_t, kNumSpc>& counts);
void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows);

}  // namespace rtsim::metrics
