#include "rtsim/mobsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "rtsim/csv.hpp"

namespace rtsim::mobsim {

namespace {
const std::array<std::string, 11> kEventNames = {
    "actEnd",  "departure", "linkEnter", "linkLeave", "arrival", "actStart",
    "rtRequest", "rtDispatch", "rtPickup", "rtDropoff", "stuck"};

constexpr Id kCarVehicleBase = 1'000'000'000;
constexpr std::int64_t kDayLenSec = 24 * 3600;
}  // namespace

const std::string& to_string(EventType t) { return kEventNames[static_cast<int>(t)]; }

void EventLog::write_csv(const std::filesystem::path& path) const {
  csv::Writer w(path);
  w.field(std::string("timeSec"))
      .field("type")
      .field("personId")
      .field("vehicleId")
      .field("linkId")
      .field("aux");
  w.end_row();
  for (const auto& e : events) {
    w.field(e.time_sec).field(to_string(e.type));
    if (e.person_id >= 0)
      w.field(e.person_id);
    else
      w.blank();
    if (e.vehicle_id >= 0)
      w.field(e.vehicle_id);
    else
      w.blank();
    if (e.link_id >= 0)
      w.field(e.link_id);
    else
      w.blank();
    w.field(e.aux);
    w.end_row();
  }
  w.close();
}

EventLog EventLog::load_csv(const std::filesystem::path& path) {
  EventLog log;
  auto t = csv::read_file(path);
  std::size_t c_t = t.column("timeSec"), c_type = t.column("type"),
              c_p = t.column("personId"), c_v = t.column("vehicleId"),
              c_l = t.column("linkId"), c_a = t.column("aux");
  for (const auto& r : t.rows) {
    Event e;
    e.time_sec = csv::to_i64(r[c_t], path.string());
    for (std::size_t i = 0; i < kEventNames.size(); ++i)
      if (kEventNames[i] == r[c_type]) e.type = static_cast<EventType>(i);
    e.person_id = r[c_p].empty() ? -1 : csv::to_i64(r[c_p], path.string());
    e.vehicle_id = r[c_v].empty() ? -1 : csv::to_i64(r[c_v], path.string());
    e.link_id = r[c_l].empty() ? -1 : csv::to_i64(r[c_l], path.string());
    e.aux = r[c_a];
    log.events.push_back(std::move(e));
  }
  return log;
}

TeleportResult teleport_leg(Mode mode, double from_x, double from_y, double to_x,
                            double to_y, const MobsimConfig& cfg) {
  TeleportResult out;
  const double beeline_m = std::hypot(to_x - from_x, to_y - from_y);
  double detour, speed_kmh, cost;
  if (mode == Mode::walk) {
    detour = cfg.walk_detour;
    speed_kmh = cfg.walk_speed_kmh;
    cost = 0.0;
  } else if (mode == Mode::pt) {
    detour = cfg.pt_detour;
    speed_kmh = cfg.pt_speed_kmh;
    cost = cfg.pt_fare_eur;
  } else {
    throw DataError("teleport_leg: mode " + rtsim::to_string(mode) + " is not teleported");
  }
  const double dist_m = beeline_m * detour;
  out.dist_km = dist_m / 1000.0;
  out.travel_sec = static_cast<std::int64_t>(std::llround(dist_m / (speed_kmh / 3.6)));
  out.cost_eur = cost;
  return out;
}

void LinkQueue::refill(std::int64_t now_sec) {
  if (now_sec <= last_refill_sec) return;
  const double burst = std::max(1.0, flow_cap_per_sec);
  tokens = std::min(burst,
                    tokens + flow_cap_per_sec * static_cast<double>(now_sec - last_refill_sec));
  last_refill_sec = now_sec;
}

bool LinkQueue::head_ready(std::int64_t now_sec) const {
  return !queue.empty() && queue.front().earliest_exit_sec <= now_sec;
}

LinkQueue LinkQueue::from_link(const Link& l, const MobsimConfig& cfg) {
  LinkQueue q;
  q.freeflow_sec = l.freeflow_sec;
  q.storage_capacity =
      std::max(1.0, l.length_m * l.lanes / cfg.cell_length_m) * cfg.storage_capacity_factor;
  q.flow_cap_per_sec = l.flow_capacity_veh_h / 3600.0 * cfg.flow_capacity_factor;
  q.tokens = std::max(1.0, q.flow_cap_per_sec);
  q.last_refill_sec = 0;
  return q;
}

std::vector<Id> process_link_queue(LinkQueue& q, std::int64_t now_sec, LinkQueue& downstream) {
  q.refill(now_sec);
  std::vector<Id> exited;
  while (q.head_ready(now_sec) && q.tokens >= 1.0 &&
         static_cast<double>(downstream.occupancy()) < downstream.storage_capacity) {
    LinkQueue::Entry e = q.queue.front();
    q.queue.pop_front();
    q.tokens -= 1.0;
    downstream.queue.push_back({e.vehicle_id, now_sec + downstream.freeflow_sec, e.run_index});
    exited.push_back(e.vehicle_id);
  }
  return exited;
}

// ---------------------------------------------------------------------------
// day engine
// ---------------------------------------------------------------------------

namespace {

struct VehicleRun {
  Id vehicle_id = -1;
  std::vector<int> route;
  std::size_t pos = 0;
  double dist_m = 0.0;
  enum class Kind { personal, rt_pickup, rt_occupied } kind = Kind::personal;
  int agent = -1;  // personal: driver
  int leg = -1;
  Id rt_vehicle = -1;
  Id request = -1;
};

struct QueueEntryMeta {
  std::int64_t entered_sec = 0;
};

struct TeleportArrival {
  int agent = -1;
  int leg = -1;
};

struct FleetTransition {
  Id vehicle = -1;
  fleet::TaskType completed = fleet::TaskType::Ingress;
};

class DayEngine {
public:
  DayEngine(std::vector<AgentInput>& agents, const Network& net, const TravelTimeField& ttf,
            fleet::FleetState* fleet, const MobsimConfig& cfg)
      : agents_(agents), net_(net), ttf_(ttf), fleet_(fleet), cfg_(cfg) {}

  DayResult run() {
    init();
    std::int64_t t = -1;
    while (true) {
      std::int64_t next = std::numeric_limits<std::int64_t>::max();
      if (!act_end_sched_.empty()) next = std::min(next, act_end_sched_.begin()->first);
      if (!tele_sched_.empty()) next = std::min(next, tele_sched_.begin()->first);
      if (!fleet_sched_.empty()) next = std::min(next, fleet_sched_.begin()->first);
      if (!active_.empty()) next = std::min(next, t + 1);
      if (next == std::numeric_limits<std::int64_t>::max()) break;
      t = next;
      step(t);
    }
    close(t);
    return std::move(result_);
  }

private:
  std::vector<AgentInput>& agents_;
  const Network& net_;
  const TravelTimeField& ttf_;
  fleet::FleetState* fleet_;
  MobsimConfig cfg_;

  DayResult result_;
  std::vector<LinkQueue> links_;
  std::vector<std::vector<QueueEntryMeta>> meta_;  // parallel to each queue
  std::set<int> active_;
  std::vector<VehicleRun> runs_;
  std::vector<std::size_t> agent_cur_act_;
  std::vector<int> order_;  // agent indices sorted by person id

  std::map<std::int64_t, std::vector<int>> act_end_sched_;
  std::map<std::int64_t, std::vector<TeleportArrival>> tele_sched_;
  std::map<std::int64_t, std::vector<FleetTransition>> fleet_sched_;
  std::vector<Id> new_requests_;
  std::vector<std::pair<int, int>> request_agent_leg_;  // by request id
  std::int64_t last_event_sec_ = 0;

  void emit(Event e) {
    last_event_sec_ = std::max(last_event_sec_, e.time_sec);
    result_.log.append(std::move(e));
  }

  Id link_id(int li) const { return net_.links[li].link_id; }

  void init() {
    links_.reserve(net_.links.size());
    meta_.assign(net_.links.size(), {});
    for (const auto& l : net_.links) links_.push_back(LinkQueue::from_link(l, cfg_));

    order_.resize(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) order_[i] = static_cast<int>(i);
    std::sort(order_.begin(), order_.end(), [this](int a, int b) {
      return agents_[a].person_id < agents_[b].person_id;
    });

    agent_cur_act_.assign(agents_.size(), 0);
    for (int i : order_) {
      AgentInput& a = agents_[i];
      a.plan->validate();
      a.plan->clear_realization();
      a.plan->activities[0].realized_start_sec = 0;
      if (a.plan->activities.size() > 1)
        act_end_sched_[std::max<std::int64_t>(a.plan->activities[0].planned_end_sec, 1)]
            .push_back(i);
    }
  }

  void step(std::int64_t t) {
    // fleet task transitions
    if (auto it = fleet_sched_.find(t); it != fleet_sched_.end()) {
      auto transitions = std::move(it->second);
      fleet_sched_.erase(it);
      for (const auto& tr : transitions) handle_fleet_transition(tr, t);
    }
    // activity ends -> departures
    if (auto it = act_end_sched_.find(t); it != act_end_sched_.end()) {
      auto idxs = std::move(it->second);
      act_end_sched_.erase(it);
      std::sort(idxs.begin(), idxs.end(), [this](int a, int b) {
        return agents_[a].person_id < agents_[b].person_id;
      });
      for (int i : idxs) depart(i, t);
    }
    // dispatch of requests submitted this second
    if (fleet_ && !new_requests_.empty()) {
      auto reqs = std::move(new_requests_);
      new_requests_.clear();
      for (Id r : reqs) dispatch_request(r, t);
    }
    // link queues, ascending link id
    process_links(t);
    // teleport arrivals
    if (auto it = tele_sched_.find(t); it != tele_sched_.end()) {
      auto arrivals = std::move(it->second);
      tele_sched_.erase(it);
      for (const auto& a : arrivals) teleport_arrive(a, t);
    }
  }

  void depart(int i, std::int64_t t) {
    AgentInput& a = agents_[i];
    const std::size_t act = agent_cur_act_[i];
    DailyPlan& plan = *a.plan;
    plan.activities[act].realized_end_sec = t;
    emit({t, EventType::actEnd, a.person_id, -1, link_id(a.act_link[act]),
          rtsim::to_string(plan.activities[act].type)});
    Leg& leg = plan.legs[act];
    leg.dep_sec = t;
    emit({t, EventType::departure, a.person_id, -1, link_id(a.act_link[act]),
          rtsim::to_string(leg.mode)});

    switch (leg.mode) {
      case Mode::walk:
      case Mode::pt: {
        TeleportResult tr = teleport_leg(leg.mode, a.act_x[act], a.act_y[act],
                                         a.act_x[act + 1], a.act_y[act + 1], cfg_);
        leg.dist_km = tr.dist_km;
        leg.cost_eur = tr.cost_eur;
        tele_sched_[t + tr.travel_sec].push_back({i, static_cast<int>(act)});
        break;
      }
      case Mode::car: {
        start_drive(i, static_cast<int>(act), t);
        break;
      }
      case Mode::robotaxi: {
        if (!fleet_ || !fleet_->config().enabled()) {
          reject_leg(i, static_cast<int>(act), t);
          break;
        }
        Id req = fleet_->register_request(a.person_id, a.act_link[act], a.act_link[act + 1], t);
        request_agent_leg_.push_back({i, static_cast<int>(act)});
        emit({t, EventType::rtRequest, a.person_id, -1, link_id(a.act_link[act]),
              std::to_string(req)});
        new_requests_.push_back(req);
        break;
      }
    }
  }

  void start_drive(int i, int leg_idx, std::int64_t t) {
    AgentInput& a = agents_[i];
    Leg& leg = a.plan->legs[leg_idx];
    const int from = a.act_link[leg_idx];
    const int to = a.act_link[leg_idx + 1];
    auto route = route_vehicle(net_, ttf_, from, to, t);
    const Id veh = kCarVehicleBase + a.person_id;
    if (!route) {
      // unreachable destination: surfaced as an immediately stuck agent
      leg.stuck = true;
      ++result_.stuck_count;
      emit({t, EventType::stuck, a.person_id, veh, link_id(from), rtsim::to_string(leg.mode)});
      arrive(i, leg_idx, t, 0.0, Mode::car);
      return;
    }
    if (route->link_indices.empty()) {
      arrive(i, leg_idx, t, 0.0, Mode::car);
      return;
    }
    VehicleRun run;
    run.vehicle_id = veh;
    run.route = std::move(route->link_indices);
    run.dist_m = route->dist_m;
    run.kind = VehicleRun::Kind::personal;
    run.agent = i;
    run.leg = leg_idx;
    runs_.push_back(std::move(run));
    enter_link(static_cast<int>(runs_.size() - 1), t);
  }

  void enter_link(int run_idx, std::int64_t t) {
    VehicleRun& run = runs_[run_idx];
    const int li = run.route[run.pos];
    emit({t, EventType::linkEnter, -1, run.vehicle_id, link_id(li), ""});
    links_[li].queue.push_back({run.vehicle_id, t + links_[li].freeflow_sec, run_idx});
    meta_[li].push_back({t});
    active_.insert(li);
  }

  void process_links(std::int64_t t) {
    std::vector<int> emptied;
    for (int li : active_) {
      LinkQueue& q = links_[li];
      q.refill(t);
      while (q.head_ready(t)) {
        const LinkQueue::Entry head = q.queue.front();
        VehicleRun& run = runs_[head.run_index];
        const bool final_link = run.pos + 1 == run.route.size();
        if (final_link) {
          // arrivals leave at the link end without consuming flow capacity
          pop_head(li, t, /*record_obs=*/true);
          complete_run(head.run_index, t, /*stuck=*/false);
          continue;
        }
        const int next = run.route[run.pos + 1];
        const bool can_flow = q.tokens >= 1.0;
        const bool has_room =
            static_cast<double>(links_[next].occupancy()) < links_[next].storage_capacity;
        if (can_flow && has_room) {
          q.tokens -= 1.0;
          pop_head(li, t, /*record_obs=*/true);
          run.pos += 1;
          enter_link(head.run_index, t);
          continue;
        }
        // blocked: spillback, unless the head has been stuck too long
        if (t - head.earliest_exit_sec >= cfg_.stuck_sec) {
          pop_head(li, t, /*record_obs=*/false);
          stuck_teleport(head.run_index, li, t);
          continue;
        }
        break;
      }
      if (q.queue.empty()) emptied.push_back(li);
    }
    for (int li : emptied) active_.erase(li);
  }

  void pop_head(int li, std::int64_t t, bool record_obs) {
    LinkQueue& q = links_[li];
    const LinkQueue::Entry head = q.queue.front();
    const QueueEntryMeta m = meta_[li].front();
    q.queue.pop_front();
    meta_[li].erase(meta_[li].begin());
    emit({t, EventType::linkLeave, -1, head.vehicle_id, link_id(li), ""});
    if (record_obs) result_.observations.push_back({li, m.entered_sec, t - m.entered_sec});
  }

  void stuck_teleport(int run_idx, int li, std::int64_t t) {
    VehicleRun& run = runs_[run_idx];
    ++result_.stuck_count;
    const Id person =
        run.kind == VehicleRun::Kind::personal ? agents_[run.agent].person_id
        : run.request >= 0                     ? fleet_->request(run.request).person_id
                                               : Id(-1);
    emit({t, EventType::stuck, person, run.vehicle_id, link_id(li), ""});
    if (run.kind == VehicleRun::Kind::personal) {
      agents_[run.agent].plan->legs[run.leg].stuck = true;
    } else if (run.kind == VehicleRun::Kind::rt_occupied && run.request >= 0) {
      int agent = request_agent_leg_[run.request].first;
      int leg = request_agent_leg_[run.request].second;
      agents_[agent].plan->legs[leg].stuck = true;
    }
    complete_run(run_idx, t, /*stuck=*/true);
  }

  void complete_run(int run_idx, std::int64_t t, bool stuck) {
    (void)stuck;
    VehicleRun& run = runs_[run_idx];
    const int final_li = run.route.back();
    switch (run.kind) {
      case VehicleRun::Kind::personal:
        arrive(run.agent, run.leg, t, run.dist_m / 1000.0, Mode::car);
        break;
      case VehicleRun::Kind::rt_pickup: {
        fleet_->set_vehicle_link(run.rt_vehicle, final_li);
        fleet_->add_task_distance(run.rt_vehicle, run.dist_m / 1000.0);
        fleet_->begin_task(run.rt_vehicle, fleet::TaskType::Ingress, t);
        fleet_sched_[t + fleet_->config().ingress_sec].push_back(
            {run.rt_vehicle, fleet::TaskType::Ingress});
        break;
      }
      case VehicleRun::Kind::rt_occupied: {
        fleet_->set_vehicle_link(run.rt_vehicle, final_li);
        fleet_->add_task_distance(run.rt_vehicle, run.dist_m / 1000.0);
        if (run.request >= 0) {
          int agent = request_agent_leg_[run.request].first;
          int leg = request_agent_leg_[run.request].second;
          agents_[agent].plan->legs[leg].dist_km = run.dist_m / 1000.0;
        }
        fleet_->begin_task(run.rt_vehicle, fleet::TaskType::Egress, t);
        fleet_sched_[t + fleet_->config().egress_sec].push_back(
            {run.rt_vehicle, fleet::TaskType::Egress});
        break;
      }
    }
  }

  void arrive(int i, int leg_idx, std::int64_t t, double dist_km, Mode realized) {
    AgentInput& a = agents_[i];
    Leg& leg = a.plan->legs[leg_idx];
    leg.arr_sec = t;
    if (leg.mode == Mode::car) leg.dist_km = dist_km;
    emit({t, EventType::arrival, a.person_id, -1, link_id(a.act_link[leg_idx + 1]),
          rtsim::to_string(realized) + (leg.stuck ? ":stuck" : "")});
    start_activity(i, t);
  }

  void start_activity(int i, std::int64_t t) {
    AgentInput& a = agents_[i];
    agent_cur_act_[i] += 1;
    const std::size_t act = agent_cur_act_[i];
    DailyPlan& plan = *a.plan;
    plan.activities[act].realized_start_sec = t;
    emit({t, EventType::actStart, a.person_id, -1, link_id(a.act_link[act]),
          rtsim::to_string(plan.activities[act].type)});
    if (act + 1 < plan.activities.size()) {
      act_end_sched_[std::max(plan.activities[act].planned_end_sec, t + 1)].push_back(i);
    }
  }

  void teleport_arrive(const TeleportArrival& ta, std::int64_t t) {
    AgentInput& a = agents_[ta.agent];
    Leg& leg = a.plan->legs[ta.leg];
    const Mode realized = leg.rejected ? Mode::walk : leg.mode;
    leg.arr_sec = t;
    emit({t, EventType::arrival, a.person_id, -1, link_id(a.act_link[ta.leg + 1]),
          rtsim::to_string(realized)});
    start_activity(ta.agent, t);
  }

  void reject_leg(int i, int leg_idx, std::int64_t t) {
    AgentInput& a = agents_[i];
    Leg& leg = a.plan->legs[leg_idx];
    leg.rejected = true;
    emit({t, EventType::rtDispatch, a.person_id, -1, link_id(a.act_link[leg_idx]),
          "rejected"});
    TeleportResult tr = teleport_leg(Mode::walk, a.act_x[leg_idx], a.act_y[leg_idx],
                                     a.act_x[leg_idx + 1], a.act_y[leg_idx + 1], cfg_);
    leg.dist_km = tr.dist_km;
    leg.cost_eur = 0.0;
    tele_sched_[t + tr.travel_sec].push_back({i, leg_idx});
  }

  void dispatch_request(Id req_id, std::int64_t t) {
    auto assigned = fleet_->submit_request(req_id, net_, ttf_, t);
    const fleet::Request& req = fleet_->request(req_id);
    const auto [agent, leg] = request_agent_leg_[req_id];
    if (!assigned) {
      if (req.rejected) reject_leg(agent, leg, t);
      return;  // queued
    }
    begin_pickup(*assigned, req_id, t);
  }

  void begin_pickup(Id vehicle, Id req_id, std::int64_t t) {
    const fleet::Request& req = fleet_->request(req_id);
    fleet::RoboTaxi& veh = fleet_->vehicle(vehicle);
    emit({t, EventType::rtDispatch, req.person_id, vehicle, link_id(veh.current_link),
          std::to_string(req_id)});
    fleet_->begin_task(vehicle, fleet::TaskType::PickupDrive, t);
    auto route = route_vehicle(net_, ttf_, veh.current_link, req.origin_link, t);
    if (!route) {
      // queued request whose origin became unreachable: reject late
      fleet_->request(req_id).rejected = true;
      fleet_->begin_task(vehicle, fleet::TaskType::Stay, t);
      const auto [agent, leg] = request_agent_leg_[req_id];
      reject_leg(agent, leg, t);
      return;
    }
    if (route->link_indices.empty()) {
      fleet_->begin_task(vehicle, fleet::TaskType::Ingress, t);
      fleet_sched_[t + fleet_->config().ingress_sec].push_back(
          {vehicle, fleet::TaskType::Ingress});
      return;
    }
    VehicleRun run;
    run.vehicle_id = vehicle;
    run.route = std::move(route->link_indices);
    run.dist_m = route->dist_m;
    run.kind = VehicleRun::Kind::rt_pickup;
    run.rt_vehicle = vehicle;
    run.request = req_id;
    runs_.push_back(std::move(run));
    enter_link(static_cast<int>(runs_.size() - 1), t);
  }

  void handle_fleet_transition(const FleetTransition& tr, std::int64_t t) {
    fleet::RoboTaxi& veh = fleet_->vehicle(tr.vehicle);
    if (tr.completed == fleet::TaskType::Ingress) {
      const Id req_id = veh.current_request;
      fleet::Request& req = fleet_->request(req_id);
      req.pickup_sec = t;
      const auto [agent, leg_idx] = request_agent_leg_[req_id];
      Leg& leg = agents_[agent].plan->legs[leg_idx];
      leg.wait_sec = t - req.submission_sec;
      emit({t, EventType::rtPickup, req.person_id, tr.vehicle, link_id(veh.current_link),
            std::to_string(req_id)});
      fleet_->begin_task(tr.vehicle, fleet::TaskType::OccupiedDrive, t);
      auto route = route_vehicle(net_, ttf_, veh.current_link, req.destination_link, t);
      if (route && !route->link_indices.empty()) {
        VehicleRun run;
        run.vehicle_id = tr.vehicle;
        run.route = std::move(route->link_indices);
        run.dist_m = route->dist_m;
        run.kind = VehicleRun::Kind::rt_occupied;
        run.rt_vehicle = tr.vehicle;
        run.request = req_id;
        runs_.push_back(std::move(run));
        enter_link(static_cast<int>(runs_.size() - 1), t);
      } else {
        // same link (or unreachable: degrade to an in-place dropoff)
        if (!route) agents_[agent].plan->legs[leg_idx].stuck = true;
        fleet_->begin_task(tr.vehicle, fleet::TaskType::Egress, t);
        fleet_sched_[t + fleet_->config().egress_sec].push_back(
            {tr.vehicle, fleet::TaskType::Egress});
      }
    } else if (tr.completed == fleet::TaskType::Egress) {
      const Id req_id = veh.current_request;
      fleet::Request& req = fleet_->request(req_id);
      req.dropoff_sec = t;
      emit({t, EventType::rtDropoff, req.person_id, tr.vehicle, link_id(veh.current_link),
            std::to_string(req_id)});
      const auto [agent, leg_idx] = request_agent_leg_[req_id];
      Leg& leg = agents_[agent].plan->legs[leg_idx];
      leg.arr_sec = t;
      emit({t, EventType::arrival, req.person_id, tr.vehicle,
            link_id(agents_[agent].act_link[leg_idx + 1]),
            rtsim::to_string(Mode::robotaxi) + (leg.stuck ? ":stuck" : "")});
      start_activity(agent, t);
      veh.current_request = -1;
      fleet_->begin_task(tr.vehicle, fleet::TaskType::Stay, t);
      if (auto next_req = fleet_->on_vehicle_idle(tr.vehicle, t))
        begin_pickup(tr.vehicle, *next_req, t);
    }
  }

  void close(std::int64_t /*last_t*/) {
    result_.sim_end_sec = std::max(kDayLenSec, last_event_sec_);
    for (auto& a : agents_) {
      Activity& last = a.plan->activities.back();
      if (last.realized_start_sec < 0) last.realized_start_sec = 0;  // single-activity day
      last.realized_end_sec = std::max(kDayLenSec, last.realized_start_sec);
    }
    if (fleet_) fleet_->close_day(result_.sim_end_sec);
  }
};

}  // namespace

DayResult run_day(std::vector<AgentInput>& agents, const Network& net,
                  const TravelTimeField& ttf, fleet::FleetState* fleet,
                  const MobsimConfig& cfg) {
  DayEngine engine(agents, net, ttf, fleet, cfg);
  return engine.run();
}

}  // namespace rtsim::mobsim
