#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <vector>

#include "rtsim/network.hpp"
#include "rtsim/types.hpp"

namespace rtsim::fleet {

enum class TaskType : std::uint8_t { Stay, PickupDrive, Ingress, OccupiedDrive, Egress };
const std::string& to_string(TaskType t);
bool is_in_service(TaskType t);  // everything except Stay

struct RoboTaxi {
  Id vehicle_id = -1;
  int current_link = -1;  // link index
  TaskType state = TaskType::Stay;
  double odometer_km = 0.0;
  int depot_link = -1;
  Id current_request = -1;
};

struct Request {
  Id request_id = -1;
  Id person_id = -1;
  int origin_link = -1;
  int destination_link = -1;
  std::int64_t submission_sec = -1;
  std::int64_t pickup_sec = -1;   // end of ingress
  std::int64_t dropoff_sec = -1;  // end of egress
  bool rejected = false;
  Id vehicle_id = -1;
};

struct TaskInterval {
  Id vehicle_id = -1;
  TaskType type = TaskType::Stay;
  std::int64_t start_sec = 0;
  std::int64_t end_sec = 0;
  int link_from = -1;
  int link_to = -1;
  double dist_km = 0.0;
};

using TaskLog = std::vector<TaskInterval>;

struct FleetConfig {
  int fleet_size = 0;
  std::vector<Id> depot_link_ids;  // vehicles assigned round-robin
  std::int64_t ingress_sec = 60;
  std::int64_t egress_sec = 120;
  bool enabled() const { return fleet_size > 0; }
};

// Nearest idle vehicle by expected drive time to the request origin
// (time-dependent route cost), ties to the lowest vehicle id. Returns -1
// when the origin is unreachable from every idle vehicle.
Id dispatch_nearest_idle(const Request& request, const std::vector<const RoboTaxi*>& idle,
                         const Network& net, const TravelTimeField& ttf,
                         std::int64_t now_sec);

// Fleet bookkeeping driven by the within-day engine. All mutation happens on
// the engine's timeline; queries afterwards are read-only.
class FleetState {
public:
  FleetState() = default;
  FleetState(const FleetConfig& cfg, const Network& net);

  const FleetConfig& config() const { return cfg_; }
  std::vector<RoboTaxi>& vehicles() { return vehicles_; }
  const std::vector<RoboTaxi>& vehicles() const { return vehicles_; }
  std::vector<Request>& requests() { return requests_; }
  const std::vector<Request>& requests() const { return requests_; }
  const TaskLog& task_log() const { return log_; }

  Id register_request(Id person_id, int origin_link, int destination_link,
                      std::int64_t now_sec);

  // Immediate dispatch when an idle vehicle exists, else FIFO queueing.
  // Returns the assigned vehicle id, nullopt when queued or rejected
  // (rejected requests are marked on the request record).
  std::optional<Id> submit_request(Id request_id, const Network& net,
                                   const TravelTimeField& ttf, std::int64_t now_sec);

  // Oldest pending request for a vehicle that just went idle.
  std::optional<Id> on_vehicle_idle(Id vehicle_id, std::int64_t now_sec);

  // task transitions (close the open task, open the next one)
  void begin_task(Id vehicle_id, TaskType type, std::int64_t now_sec);
  void add_task_distance(Id vehicle_id, double km);
  void set_vehicle_link(Id vehicle_id, int link);
  void close_day(std::int64_t end_sec);

  RoboTaxi& vehicle(Id vehicle_id);
  Request& request(Id request_id);
  std::size_t pending_count() const { return pending_.size(); }

  void write_tasks_csv(const std::filesystem::path& path, const Network& net) const;
  void write_requests_csv(const std::filesystem::path& path) const;

private:
  struct OpenTask {
    TaskType type = TaskType::Stay;
    std::int64_t start_sec = 0;
    int link_from = -1;
    double dist_km = 0.0;
  };

  FleetConfig cfg_;
  std::vector<RoboTaxi> vehicles_;
  std::vector<Request> requests_;
  std::deque<Id> pending_;
  std::vector<OpenTask> open_;
  TaskLog log_;
};

// Share of fleet task time spent in non-stay tasks per time bin:
//   rate(bin) = in-service task seconds / all task seconds within the bin.
// occupied_only restricts the numerator to OccupiedDrive.
std::vector<double> compute_in_service_rates(const TaskLog& log, std::int64_t bin_sec,
                                             std::int64_t day_end_sec,
                                             bool occupied_only = false);

}  // namespace rtsim::fleet
