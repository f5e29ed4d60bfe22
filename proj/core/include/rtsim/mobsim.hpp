#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include "rtsim/fleet.hpp"
#include "rtsim/network.hpp"
#include "rtsim/types.hpp"

namespace rtsim::mobsim {

enum class EventType : std::uint8_t {
  actEnd,
  departure,
  linkEnter,
  linkLeave,
  arrival,
  actStart,
  rtRequest,
  rtDispatch,
  rtPickup,
  rtDropoff,
  stuck
};
const std::string& to_string(EventType t);

struct Event {
  std::int64_t time_sec = 0;
  EventType type = EventType::actEnd;
  Id person_id = -1;
  Id vehicle_id = -1;
  Id link_id = -1;
  std::string aux;
};

struct EventLog {
  std::vector<Event> events;
  void append(Event e) { events.push_back(std::move(e)); }
  // timeSec,type,personId,vehicleId,linkId,aux — fixed order, LF endings
  void write_csv(const std::filesystem::path& path) const;
  static EventLog load_csv(const std::filesystem::path& path);
};

struct MobsimConfig {
  double cell_length_m = 7.5;
  std::int64_t stuck_sec = 3600;
  double stuck_penalty = -100.0;  // applied by plan scoring via Leg::stuck
  double walk_speed_kmh = 5.0;
  double walk_detour = 1.3;
  double pt_speed_kmh = 20.0;
  double pt_detour = 1.3;
  double pt_fare_eur = 1.43;
  // scale factors; large values approximate infinite capacities
  double flow_capacity_factor = 1.0;
  double storage_capacity_factor = 1.0;
};

struct TeleportResult {
  std::int64_t travel_sec = 0;
  double dist_km = 0.0;
  double cost_eur = 0.0;
};

// Analytic leg: beeline * detour at the mode speed; pt pays the flat fare.
TeleportResult teleport_leg(Mode mode, double from_x, double from_y, double to_x,
                            double to_y, const MobsimConfig& cfg);

// FIFO link queue with a token-bucket flow constraint and storage-limited
// spillback. Vehicles may exit once their free-flow traversal has elapsed,
// one flow token is available and the downstream queue has room.
struct LinkQueue {
  struct Entry {
    Id vehicle_id = -1;
    std::int64_t earliest_exit_sec = 0;
    int run_index = -1;  // engine bookkeeping; -1 in stand-alone use
  };
  std::deque<Entry> queue;
  double storage_capacity = 1.0;
  double flow_cap_per_sec = 1.0;
  std::int64_t freeflow_sec = 1;
  double tokens = 1.0;
  std::int64_t last_refill_sec = 0;

  std::size_t occupancy() const { return queue.size(); }
  void refill(std::int64_t now_sec);
  bool head_ready(std::int64_t now_sec) const;
  static LinkQueue from_link(const Link& l, const MobsimConfig& cfg);
};

// One step of the queue exchange between a link and its downstream link;
// moves every releasable head vehicle, returns their ids in exit order.
std::vector<Id> process_link_queue(LinkQueue& q, std::int64_t now_sec, LinkQueue& downstream);

// Per-activity anchoring of one agent's plan; plans are realized in place.
struct AgentInput {
  Id person_id = -1;
  DailyPlan* plan = nullptr;
  std::vector<double> act_x, act_y;  // coordinate per activity
  std::vector<int> act_link;         // link index per activity
  int household_cars = 0;
};

struct DayResult {
  EventLog log;
  std::vector<TravelTimeField::Observation> observations;
  std::int64_t sim_end_sec = 0;
  int stuck_count = 0;
};

// Execute all selected plans for one day. Fully deterministic: agents are
// processed in person-id order, links in ascending link id, requests in
// submission order. fleet may be null when no robotaxi service runs.
DayResult run_day(std::vector<AgentInput>& agents, const Network& net,
                  const TravelTimeField& ttf, fleet::FleetState* fleet,
                  const MobsimConfig& cfg);

}  // namespace rtsim::mobsim
