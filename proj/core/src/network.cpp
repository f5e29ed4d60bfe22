#include "rtsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "rtsim/csv.hpp"

namespace rtsim {

int Network::node_index(Id node_id) const {
  auto it = node_idx_.find(node_id);
  if (it == node_idx_.end()) throw DataError("unknown node id " + std::to_string(node_id));
  return it->second;
}

int Network::link_index(Id link_id) const {
  auto it = link_idx_.find(link_id);
  if (it == link_idx_.end()) throw DataError("unknown link id " + std::to_string(link_id));
  return it->second;
}

void Network::build_index() {
  std::sort(links.begin(), links.end(),
            [](const Link& a, const Link& b) { return a.link_id < b.link_id; });
  node_idx_.clear();
  link_idx_.clear();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!node_idx_.emplace(nodes[i].node_id, static_cast<int>(i)).second)
      throw DataError("duplicate node id " + std::to_string(nodes[i].node_id));
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    Link& l = links[i];
    if (!link_idx_.emplace(l.link_id, static_cast<int>(i)).second)
      throw DataError("duplicate link id " + std::to_string(l.link_id));
    l.freeflow_sec = static_cast<std::int64_t>(std::ceil(l.length_m / l.freespeed_mps));
    if (l.freeflow_sec < 1) l.freeflow_sec = 1;
  }
  out_links.assign(nodes.size(), {});
  for (std::size_t i = 0; i < links.size(); ++i)
    out_links[node_index(links[i].from_node)].push_back(static_cast<int>(i));
  // links vector is id-sorted, so out lists are too
}

void Network::validate() const {
  if (nodes.empty() || links.empty()) throw DataError("network is empty");
  for (const auto& l : links) {
    if (l.length_m <= 0.0)
      throw DataError("link " + std::to_string(l.link_id) + " has non-positive length");
    if (l.freespeed_mps <= 0.0)
      throw DataError("link " + std::to_string(l.link_id) + " has non-positive freespeed");
    node_index(l.from_node);
    node_index(l.to_node);
  }
  // weak connectivity over the car network
  std::vector<std::vector<int>> undirected(nodes.size());
  for (const auto& l : links) {
    undirected[node_index(l.from_node)].push_back(node_index(l.to_node));
    undirected[node_index(l.to_node)].push_back(node_index(l.from_node));
  }
  std::vector<char> seen(nodes.size(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    int n = q.front();
    q.pop();
    for (int m : undirected[n])
      if (!seen[m]) {
        seen[m] = 1;
        ++count;
        q.push(m);
      }
  }
  if (count != nodes.size()) throw DataError("network is not weakly connected");
}

Network Network::load_csv(const std::filesystem::path& nodes_path,
                          const std::filesystem::path& links_path) {
  Network net;
  auto nt = csv::read_file(nodes_path);
  std::size_t n_id = nt.column("nodeId"), n_x = nt.column("x"), n_y = nt.column("y");
  for (const auto& r : nt.rows)
    net.nodes.push_back({csv::to_i64(r[n_id], nodes_path.string()),
                         csv::to_double(r[n_x], nodes_path.string()),
                         csv::to_double(r[n_y], nodes_path.string())});

  auto lt = csv::read_file(links_path);
  std::size_t l_id = lt.column("linkId"), l_from = lt.column("fromNode"),
              l_to = lt.column("toNode"), l_len = lt.column("lengthM"),
              l_speed = lt.column("freespeedMps"),
              l_cap = lt.column("flowCapacityVehPerHour"), l_lanes = lt.column("lanes");
  for (const auto& r : lt.rows) {
    Link l;
    l.link_id = csv::to_i64(r[l_id], links_path.string());
    l.from_node = csv::to_i64(r[l_from], links_path.string());
    l.to_node = csv::to_i64(r[l_to], links_path.string());
    l.length_m = csv::to_double(r[l_len], links_path.string());
    l.freespeed_mps = csv::to_double(r[l_speed], links_path.string());
    l.flow_capacity_veh_h = csv::to_double(r[l_cap], links_path.string());
    l.lanes = csv::to_double(r[l_lanes], links_path.string());
    net.links.push_back(l);
  }
  net.build_index();
  net.validate();
  return net;
}

void Network::write_csv(const std::filesystem::path& nodes_path,
                        const std::filesystem::path& links_path) const {
  csv::Writer nw(nodes_path);
  nw.field(std::string("nodeId")).field("x").field("y");
  nw.end_row();
  for (const auto& n : nodes) {
    nw.field(n.node_id).field(n.x).field(n.y);
    nw.end_row();
  }
  nw.close();
  csv::Writer lw(links_path);
  lw.field(std::string("linkId"))
      .field("fromNode")
      .field("toNode")
      .field("lengthM")
      .field("freespeedMps")
      .field("flowCapacityVehPerHour")
      .field("lanes");
  lw.end_row();
  for (const auto& l : links) {
    lw.field(l.link_id)
        .field(l.from_node)
        .field(l.to_node)
        .field(l.length_m)
        .field(l.freespeed_mps)
        .field(l.flow_capacity_veh_h)
        .field(l.lanes);
    lw.end_row();
  }
  lw.close();
}

double Network::link_mid_x(int li) const {
  const Link& l = links[li];
  return 0.5 * (nodes[node_index(l.from_node)].x + nodes[node_index(l.to_node)].x);
}

double Network::link_mid_y(int li) const {
  const Link& l = links[li];
  return 0.5 * (nodes[node_index(l.from_node)].y + nodes[node_index(l.to_node)].y);
}

int Network::nearest_link(double x, double y) const {
  int best = -1;
  double best_d2 = 0.0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    double dx = link_mid_x(static_cast<int>(i)) - x;
    double dy = link_mid_y(static_cast<int>(i)) - y;
    double d2 = dx * dx + dy * dy;
    if (best < 0 || d2 < best_d2) {
      best = static_cast<int>(i);
      best_d2 = d2;
    }
  }
  return best;
}

TravelTimeField::TravelTimeField(const Network& net, int bin_sec, int horizon_sec)
    : bin_sec_(bin_sec), num_bins_(horizon_sec / bin_sec) {
  freeflow_.reserve(net.links.size());
  for (const auto& l : net.links) freeflow_.push_back(static_cast<double>(l.freeflow_sec));
  time_.assign(net.links.size(), std::vector<double>());
  for (std::size_t i = 0; i < net.links.size(); ++i)
    time_[i].assign(num_bins_, freeflow_[i]);
}

int TravelTimeField::bin_of(std::int64_t t) const {
  if (t < 0) return 0;
  std::int64_t b = t / bin_sec_;
  return static_cast<int>(std::min<std::int64_t>(b, num_bins_ - 1));
}

double TravelTimeField::link_time(int link_index, std::int64_t enter_sec) const {
  return time_[link_index][bin_of(enter_sec)];
}

void TravelTimeField::update(const std::vector<Observation>& obs, double new_weight) {
  std::vector<std::vector<double>> sum(time_.size());
  std::vector<std::vector<int>> cnt(time_.size());
  for (const auto& o : obs) {
    auto& s = sum[o.link_index];
    auto& c = cnt[o.link_index];
    if (s.empty()) {
      s.assign(num_bins_, 0.0);
      c.assign(num_bins_, 0);
    }
    int b = bin_of(o.enter_sec);
    s[b] += static_cast<double>(o.travel_sec);
    c[b] += 1;
  }
  for (std::size_t li = 0; li < time_.size(); ++li) {
    if (sum[li].empty()) continue;
    for (int b = 0; b < num_bins_; ++b) {
      if (cnt[li][b] == 0) continue;
      double avg = sum[li][b] / cnt[li][b];
      double blended = (1.0 - new_weight) * time_[li][b] + new_weight * avg;
      time_[li][b] = std::max(blended, freeflow_[li]);
    }
  }
}

namespace {
constexpr std::int64_t kUnreached = -1;
}

std::optional<Route> route_vehicle(const Network& net, const TravelTimeField& ttf,
                                   int from_link, int to_link, std::int64_t dep_sec) {
  Route route;
  if (from_link == to_link) return route;

  const std::size_t n = net.links.size();
  // dist = absolute time at which the vehicle finishes traversing the link
  std::vector<std::int64_t> dist(n, kUnreached);
  using QE = std::pair<std::int64_t, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;

  dist[from_link] =
      dep_sec + static_cast<std::int64_t>(ttf.link_time(from_link, dep_sec));
  pq.push({dist[from_link], from_link});

  std::vector<char> settled(n, 0);
  std::int64_t target_dist = kUnreached;
  while (!pq.empty()) {
    auto [d, li] = pq.top();
    // settle everything with cost <= dist(target) so the tie-break walk below
    // sees the whole shortest-path DAG
    if (target_dist != kUnreached && d > target_dist) break;
    pq.pop();
    if (settled[li]) continue;
    settled[li] = 1;
    if (li == to_link) target_dist = d;
    int head = net.node_index(net.links[li].to_node);
    for (int succ : net.out_links[head]) {
      std::int64_t cand = d + static_cast<std::int64_t>(ttf.link_time(succ, d));
      if (dist[succ] == kUnreached || cand < dist[succ]) {
        dist[succ] = cand;
        pq.push({cand, succ});
      }
    }
  }
  if (target_dist == kUnreached) return std::nullopt;

  // Mark links that can reach the target inside the shortest-path DAG
  // (edges x->y with dist[y] == dist[x] + time(y, dist[x])).
  std::vector<char> reaches(n, 0);
  reaches[to_link] = 1;
  // process candidates in descending dist: every DAG edge goes strictly
  // upward in dist, so one sweep suffices
  std::vector<int> settled_links;
  for (std::size_t i = 0; i < n; ++i)
    if (settled[i] && dist[i] <= target_dist) settled_links.push_back(static_cast<int>(i));
  std::sort(settled_links.begin(), settled_links.end(),
            [&dist](int a, int b) { return dist[a] > dist[b]; });
  for (int li : settled_links) {
    if (reaches[li]) continue;
    int head = net.node_index(net.links[li].to_node);
    for (int succ : net.out_links[head]) {
      if (dist[succ] == kUnreached || !settled[succ]) continue;
      if (dist[succ] == dist[li] + static_cast<std::int64_t>(ttf.link_time(succ, dist[li])) &&
          reaches[succ]) {
        reaches[li] = 1;
        break;
      }
    }
  }
  if (!reaches[from_link]) return std::nullopt;  // defensive; cannot happen

  // Lexicographically smallest route: from the origin, repeatedly take the
  // smallest-id successor that stays on a shortest path reaching the target.
  route.link_indices.push_back(from_link);
  int cur = from_link;
  while (cur != to_link) {
    int head = net.node_index(net.links[cur].to_node);
    int next = -1;
    for (int succ : net.out_links[head]) {  // ascending link id
      if (dist[succ] == kUnreached || !settled[succ] || !reaches[succ]) continue;
      if (dist[succ] ==
          dist[cur] + static_cast<std::int64_t>(ttf.link_time(succ, dist[cur]))) {
        next = succ;
        break;
      }
    }
    if (next < 0) return std::nullopt;  // defensive
    route.link_indices.push_back(next);
    cur = next;
  }
  route.travel_sec = target_dist - dep_sec;
  for (int li : route.link_indices) route.dist_m += net.links[li].length_m;
  return route;
}

std::optional<Route> route_vehicle_by_id(const Network& net, const TravelTimeField& ttf,
                                         Id from_link_id, Id to_link_id,
                                         std::int64_t dep_sec) {
  return route_vehicle(net, ttf, net.link_index(from_link_id), net.link_index(to_link_id),
                       dep_sec);
}

}  // namespace rtsim
