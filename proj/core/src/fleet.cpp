#include "rtsim/fleet.hpp"

#include <algorithm>

#include "rtsim/csv.hpp"

namespace rtsim::fleet {

namespace {
const std::array<std::string, 5> kTaskNames = {"STAY", "PICKUP_DRIVE", "INGRESS",
                                               "OCCUPIED_DRIVE", "EGRESS"};
}

const std::string& to_string(TaskType t) { return kTaskNames[static_cast<int>(t)]; }

bool is_in_service(TaskType t) { return t != TaskType::Stay; }

Id dispatch_nearest_idle(const Request& request, const std::vector<const RoboTaxi*>& idle,
                         const Network& net, const TravelTimeField& ttf,
                         std::int64_t now_sec) {
  Id best = -1;
  std::int64_t best_time = 0;
  for (const RoboTaxi* v : idle) {
    auto route = route_vehicle(net, ttf, v->current_link, request.origin_link, now_sec);
    if (!route) continue;
    if (best < 0 || route->travel_sec < best_time ||
        (route->travel_sec == best_time && v->vehicle_id < best)) {
      best = v->vehicle_id;
      best_time = route->travel_sec;
    }
  }
  return best;
}

FleetState::FleetState(const FleetConfig& cfg, const Network& net) : cfg_(cfg) {
  if (!cfg.enabled()) return;
  if (cfg.depot_link_ids.empty()) throw ConfigError("fleet.depots must not be empty");
  vehicles_.reserve(cfg.fleet_size);
  open_.reserve(cfg.fleet_size);
  for (int i = 0; i < cfg.fleet_size; ++i) {
    RoboTaxi v;
    v.vehicle_id = i + 1;
    v.depot_link = net.link_index(cfg.depot_link_ids[i % cfg.depot_link_ids.size()]);
    v.current_link = v.depot_link;
    v.state = TaskType::Stay;
    vehicles_.push_back(v);
    open_.push_back({TaskType::Stay, 0, v.depot_link, 0.0});
  }
}

RoboTaxi& FleetState::vehicle(Id vehicle_id) {
  if (vehicle_id < 1 || vehicle_id > static_cast<Id>(vehicles_.size()))
    throw DataError("unknown robotaxi id " + std::to_string(vehicle_id));
  return vehicles_[vehicle_id - 1];
}

Request& FleetState::request(Id request_id) {
  if (request_id < 0 || request_id >= static_cast<Id>(requests_.size()))
    throw DataError("unknown request id " + std::to_string(request_id));
  return requests_[request_id];
}

Id FleetState::register_request(Id person_id, int origin_link, int destination_link,
                                std::int64_t now_sec) {
  Request r;
  r.request_id = static_cast<Id>(requests_.size());
  r.person_id = person_id;
  r.origin_link = origin_link;
  r.destination_link = destination_link;
  r.submission_sec = now_sec;
  requests_.push_back(r);
  return r.request_id;
}

std::optional<Id> FleetState::submit_request(Id request_id, const Network& net,
                                             const TravelTimeField& ttf,
                                             std::int64_t now_sec) {
  Request& req = request(request_id);
  std::vector<const RoboTaxi*> idle;
  for (const auto& v : vehicles_)
    if (v.state == TaskType::Stay) idle.push_back(&v);
  if (idle.empty()) {
    pending_.push_back(request_id);
    return std::nullopt;
  }
  Id chosen = dispatch_nearest_idle(req, idle, net, ttf, now_sec);
  if (chosen < 0) {
    req.rejected = true;
    return std::nullopt;
  }
  req.vehicle_id = chosen;
  vehicle(chosen).current_request = request_id;
  return chosen;
}

std::optional<Id> FleetState::on_vehicle_idle(Id vehicle_id, std::int64_t) {
  if (pending_.empty()) return std::nullopt;
  Id req_id = pending_.front();
  pending_.pop_front();
  request(req_id).vehicle_id = vehicle_id;
  vehicle(vehicle_id).current_request = req_id;
  return req_id;
}

void FleetState::begin_task(Id vehicle_id, TaskType type, std::int64_t now_sec) {
  RoboTaxi& v = vehicle(vehicle_id);
  OpenTask& open = open_[vehicle_id - 1];
  log_.push_back({vehicle_id, open.type, open.start_sec, now_sec, open.link_from,
                  v.current_link, open.dist_km});
  v.odometer_km += open.dist_km;
  open = {type, now_sec, v.current_link, 0.0};
  v.state = type;
}

void FleetState::add_task_distance(Id vehicle_id, double km) {
  open_[vehicle_id - 1].dist_km += km;
}

void FleetState::set_vehicle_link(Id vehicle_id, int link) {
  vehicle(vehicle_id).current_link = link;
}

void FleetState::close_day(std::int64_t end_sec) {
  for (auto& v : vehicles_) {
    OpenTask& open = open_[v.vehicle_id - 1];
    log_.push_back({v.vehicle_id, open.type, open.start_sec, end_sec, open.link_from,
                    v.current_link, open.dist_km});
    v.odometer_km += open.dist_km;
    open = {TaskType::Stay, end_sec, v.current_link, 0.0};
  }
}

void FleetState::write_tasks_csv(const std::filesystem::path& path,
                                 const Network& net) const {
  csv::Writer w(path);
  w.field(std::string("vehicleId"))
      .field("taskType")
      .field("startSec")
      .field("endSec")
      .field("linkFrom")
      .field("linkTo")
      .field("distanceKm");
  w.end_row();
  for (const auto& t : log_) {
    w.field(t.vehicle_id).field(to_string(t.type)).field(t.start_sec).field(t.end_sec);
    w.field(t.link_from >= 0 ? net.links[t.link_from].link_id : -1);
    w.field(t.link_to >= 0 ? net.links[t.link_to].link_id : -1);
    w.field(t.dist_km);
    w.end_row();
  }
  w.close();
}

void FleetState::write_requests_csv(const std::filesystem::path& path) const {
  csv::Writer w(path);
  w.field(std::string("requestId"))
      .field("personId")
      .field("submissionSec")
      .field("pickupSec")
      .field("dropoffSec")
      .field("waitSec");
  w.end_row();
  for (const auto& r : requests_) {
    w.field(r.request_id).field(r.person_id).field(r.submission_sec);
    if (r.pickup_sec >= 0) {
      w.field(r.pickup_sec);
      w.field(r.dropoff_sec);
      w.field(r.pickup_sec - r.submission_sec);
    } else {
      w.blank().blank().blank();
    }
    w.end_row();
  }
  w.close();
}

std::vector<double> compute_in_service_rates(const TaskLog& log, std::int64_t bin_sec,
                                             std::int64_t day_end_sec, bool occupied_only) {
  const std::size_t nbins =
      static_cast<std::size_t>((day_end_sec + bin_sec - 1) / bin_sec);
  std::vector<double> service(nbins, 0.0), total(nbins, 0.0);
  for (const auto& t : log) {
    const bool counts = occupied_only ? t.type == TaskType::OccupiedDrive
                                      : is_in_service(t.type);
    for (std::int64_t b = t.start_sec / bin_sec;
         b < static_cast<std::int64_t>(nbins) && b * bin_sec < t.end_sec; ++b) {
      std::int64_t lo = std::max(t.start_sec, b * bin_sec);
      std::int64_t hi = std::min(t.end_sec, (b + 1) * bin_sec);
      if (hi <= lo) continue;
      total[b] += static_cast<double>(hi - lo);
      if (counts) service[b] += static_cast<double>(hi - lo);
    }
  }
  std::vector<double> rates(nbins, 0.0);
  for (std::size_t b = 0; b < nbins; ++b)
    rates[b] = total[b] > 0.0 ? service[b] / total[b] : 0.0;
  return rates;
}

}  // namespace rtsim::fleet
