#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rtsim/types.hpp"

namespace rtsim {

struct Node {
  Id node_id = -1;
  double x = 0.0, y = 0.0;
};

struct Link {
  Id link_id = -1;
  Id from_node = -1, to_node = -1;
  double length_m = 0.0;
  double freespeed_mps = 0.0;
  double flow_capacity_veh_h = 0.0;
  double lanes = 1.0;

  std::int64_t freeflow_sec = 1;  // ceil(length/freespeed), >= 1
};

class Network {
public:
  std::vector<Node> nodes;
  std::vector<Link> links;  // sorted by link_id

  // out_links[node_index] = link indices leaving the node, ascending link id
  std::vector<std::vector<int>> out_links;

  int node_index(Id node_id) const;
  int link_index(Id link_id) const;
  const Link& link_by_id(Id link_id) const { return links[link_index(link_id)]; }

  // positive lengths/speeds, endpoint existence, weak connectivity
  void validate() const;
  void build_index();

  static Network load_csv(const std::filesystem::path& nodes_path,
                          const std::filesystem::path& links_path);
  void write_csv(const std::filesystem::path& nodes_path,
                 const std::filesystem::path& links_path) const;

  double link_mid_x(int li) const;
  double link_mid_y(int li) const;
  // Nearest link to a coordinate by midpoint distance; smallest id on ties.
  int nearest_link(double x, double y) const;

private:
  std::unordered_map<Id, int> node_idx_;
  std::unordered_map<Id, int> link_idx_;
};

// Per-link, per-time-bin expected travel times fed back from the previous
// iteration. Values never drop below free-flow.
class TravelTimeField {
public:
  TravelTimeField() = default;
  TravelTimeField(const Network& net, int bin_sec = 900, int horizon_sec = 36 * 3600);

  double link_time(int link_index, std::int64_t enter_sec) const;

  // Blend in one day of observations: per link and bin, mean realized travel
  // time; smoothing weight applies to the new observation.
  struct Observation {
    int link_index;
    std::int64_t enter_sec;
    std::int64_t travel_sec;
  };
  void update(const std::vector<Observation>& obs, double new_weight = 0.3);

  int bin_sec() const { return bin_sec_; }
  int num_bins() const { return num_bins_; }

private:
  int bin_sec_ = 900;
  int num_bins_ = 0;
  std::vector<double> freeflow_;
  std::vector<std::vector<double>> time_;  // [link][bin]

  int bin_of(std::int64_t t) const;
};

struct Route {
  std::vector<int> link_indices;  // includes origin and destination links;
                                  // empty when origin == destination
  std::int64_t travel_sec = 0;
  double dist_m = 0.0;
};

// Least-cost path over time-dependent link costs (entry-time bins), Dijkstra
// with the route cost counting every traversed link including the origin and
// destination links. Cost ties resolve to the lexicographically smallest
// link id sequence. Returns nullopt when the destination is unreachable.
std::optional<Route> route_vehicle(const Network& net, const TravelTimeField& ttf,
                                   int from_link, int to_link, std::int64_t dep_sec);

// Id-based wrapper.
std::optional<Route> route_vehicle_by_id(const Network& net, const TravelTimeField& ttf,
                                         Id from_link_id, Id to_link_id,
                                         std::int64_t dep_sec);

}  // namespace rtsim
