#include "rtsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rtsim/csv.hpp"

namespace rtsim::metrics {

std::map<Mode, double> modal_split(const mobsim::EventLog& log) {
  std::map<Mode, std::int64_t> counts;
  std::int64_t total = 0;
  for (const auto& e : log.events) {
    if (e.type != mobsim::EventType::arrival) continue;
    if (e.aux.find(":stuck") != std::string::npos) continue;
    counts[mode_from_string(e.aux)] += 1;
    ++total;
  }
  std::map<Mode, double> shares;
  if (total == 0) return shares;
  for (const auto& [mode, c] : counts)
    shares[mode] = static_cast<double>(c) / static_cast<double>(total);
  return shares;
}

namespace {
double nearest_rank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}
}  // namespace

WaitingStats waiting_stats(const std::vector<fleet::Request>& requests) {
  WaitingStats out;
  std::vector<double> waits;
  for (const auto& r : requests) {
    if (r.rejected) {
      ++out.rejected;
      continue;
    }
    if (r.pickup_sec < 0) continue;  // never served (day ended while pending)
    waits.push_back(static_cast<double>(r.pickup_sec - r.submission_sec));
  }
  out.served = waits.size();
  if (waits.empty()) return out;
  std::sort(waits.begin(), waits.end());
  double sum = 0.0;
  for (double w : waits) sum += w;
  out.mean_sec = sum / static_cast<double>(waits.size());
  out.p50_sec = nearest_rank(waits, 0.50);
  out.p90_sec = nearest_rank(waits, 0.90);
  out.p95_sec = nearest_rank(waits, 0.95);
  return out;
}

std::array<std::int64_t, kNumSpc> usage_by_spc(const std::vector<fleet::Request>& requests,
                                               const Population& pop) {
  std::array<std::int64_t, kNumSpc> counts{};
  std::map<Id, bool> seen;
  for (const auto& r : requests) {
    if (r.rejected || r.pickup_sec < 0) continue;
    if (seen[r.person_id]) continue;
    seen[r.person_id] = true;
    counts[static_cast<int>(pop.person(r.person_id).spc)] += 1;
  }
  return counts;
}

KpiBundle compute_kpis(const mobsim::EventLog& log, const fleet::FleetState* fleet,
                       const Population& pop, std::int64_t day_end_sec,
                       bool in_service_occupied_only) {
  KpiBundle k;
  k.modal_shares = modal_split(log);
  if (fleet && fleet->config().enabled()) {
    k.waiting = waiting_stats(fleet->requests());
    k.rt_users_by_spc = usage_by_spc(fleet->requests(), pop);
    auto rates = fleet::compute_in_service_rates(fleet->task_log(), 3600, day_end_sec,
                                                 in_service_occupied_only);
    k.hourly_in_service.assign(24, 0.0);
    for (std::size_t h = 0; h < 24 && h < rates.size(); ++h) k.hourly_in_service[h] = rates[h];

    double occupied_km = 0.0;
    for (const auto& t : fleet->task_log())
      if (t.type == fleet::TaskType::OccupiedDrive) occupied_km += t.dist_km;
    k.onboard_km_per_vehicle = fleet->vehicles().empty()
                                   ? 0.0
                                   : occupied_km / static_cast<double>(fleet->vehicles().size());

    // peak hours 8-10 and 17-19; off-peak is the rest of the day
    double m_srv = 0.0, m_tot = 0.0, e_srv = 0.0, e_tot = 0.0, o_srv = 0.0, o_tot = 0.0;
    auto add = [&](std::int64_t lo_h, std::int64_t hi_h, double& srv, double& tot) {
      for (const auto& t : fleet->task_log()) {
        std::int64_t lo = std::max(t.start_sec, lo_h * 3600);
        std::int64_t hi = std::min(t.end_sec, hi_h * 3600);
        if (hi <= lo) continue;
        tot += static_cast<double>(hi - lo);
        const bool counts = in_service_occupied_only
                                ? t.type == fleet::TaskType::OccupiedDrive
                                : fleet::is_in_service(t.type);
        if (counts) srv += static_cast<double>(hi - lo);
      }
    };
    add(8, 10, m_srv, m_tot);
    add(17, 19, e_srv, e_tot);
    add(0, 8, o_srv, o_tot);
    add(10, 17, o_srv, o_tot);
    add(19, std::max<std::int64_t>(24, (day_end_sec + 3599) / 3600), o_srv, o_tot);
    k.peak_morning_rate = m_tot > 0 ? m_srv / m_tot : 0.0;
    k.peak_evening_rate = e_tot > 0 ? e_srv / e_tot : 0.0;
    k.off_peak_rate = o_tot > 0 ? o_srv / o_tot : 0.0;
  }
  return k;
}

std::vector<ComparisonRow> comparison_report(const KpiBundle& with_factors,
                                             const KpiBundle& without_factors) {
  std::vector<ComparisonRow> rows;
  auto push = [&rows](const std::string& kpi, double a, double b) {
    ComparisonRow r;
    r.kpi = kpi;
    r.with_factors = a;
    r.without_factors = b;
    if (b != 0.0) {
      r.change = (a - b) / b;
    } else {
      r.change = a - b;
      r.absolute = true;
    }
    rows.push_back(std::move(r));
  };
  for (Mode m : kAllModes) {
    auto get = [m](const KpiBundle& k) {
      auto it = k.modal_shares.find(m);
      return it == k.modal_shares.end() ? 0.0 : it->second;
    };
    push("modal_share_" + to_string(m), get(with_factors), get(without_factors));
  }
  push("mean_wait_sec", with_factors.waiting.mean_sec, without_factors.waiting.mean_sec);
  push("served_requests", static_cast<double>(with_factors.waiting.served),
       static_cast<double>(without_factors.waiting.served));
  push("onboard_km_per_vehicle", with_factors.onboard_km_per_vehicle,
       without_factors.onboard_km_per_vehicle);
  push("peak_morning_rate", with_factors.peak_morning_rate,
       without_factors.peak_morning_rate);
  push("peak_evening_rate", with_factors.peak_evening_rate,
       without_factors.peak_evening_rate);
  push("off_peak_rate", with_factors.off_peak_rate, without_factors.off_peak_rate);
  for (int s = 0; s < kNumSpc; ++s)
    push("rt_users_" + to_string(static_cast<Spc>(s)),
         static_cast<double>(with_factors.rt_users_by_spc[s]),
         static_cast<double>(without_factors.rt_users_by_spc[s]));
  return rows;
}

void write_modal_split_csv(const std::filesystem::path& path,
                           const std::map<Mode, double>& shares) {
  csv::Writer w(path);
  w.field(std::string("mode")).field("share");
  w.end_row();
  for (Mode m : kAllModes) {
    auto it = shares.find(m);
    w.field(to_string(m)).field(it == shares.end() ? 0.0 : it->second);
    w.end_row();
  }
  w.close();
}

void write_waiting_csv(const std::filesystem::path& path, const WaitingStats& stats) {
  csv::Writer w(path);
  w.field(std::string("served"))
      .field("rejected")
      .field("meanSec")
      .field("p50Sec")
      .field("p90Sec")
      .field("p95Sec");
  w.end_row();
  w.field(static_cast<std::int64_t>(stats.served))
      .field(static_cast<std::int64_t>(stats.rejected));
  if (stats.has_stats())
    w.field(stats.mean_sec).field(stats.p50_sec).field(stats.p90_sec).field(stats.p95_sec);
  else
    w.blank().blank().blank().blank();
  w.end_row();
  w.close();
}

void write_in_service_hourly_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<int, std::vector<double>>>& rows) {
  csv::Writer w(path);
  w.field(std::string("fleetSize"));
  for (int h = 1; h <= 24; ++h) w.field("h" + std::to_string(h));
  w.end_row();
  for (const auto& [size, rates] : rows) {
    w.field(static_cast<std::int64_t>(size));
    for (int h = 0; h < 24; ++h)
      w.field(h < static_cast<int>(rates.size()) ? rates[h] : 0.0);
    w.end_row();
  }
  w.close();
}

void write_usage_by_spc_csv(const std::filesystem::path& path,
                            const std::array<std::int64_t, kNumSpc>& counts) {
  csv::Writer w(path);
  w.field(std::string("spc")).field("rtUsers");
  w.end_row();
  for (int s = 0; s < kNumSpc; ++s) {
    w.field(to_string(static_cast<Spc>(s))).field(counts[s]);
    w.end_row();
  }
  w.close();
}

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows) {
  csv::Writer w(path);
  w.field(std::string("kpi"))
      .field("withFactors")
      .field("withoutFactors")
      .field("change")
      .field("changeKind");
  w.end_row();
  for (const auto& r : rows) {
    w.field(r.kpi).field(r.with_factors).field(r.without_factors).field(r.change).field(
        r.absolute ? "absolute" : "relative");
    w.end_row();
  }
  w.close();
}

}  // namespace rtsim::metrics
