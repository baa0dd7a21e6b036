#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "disamb/error.hpp"
#include "disamb/graph.hpp"

namespace disamb {

/// The measurement catalog. First-level entries match the ten ranked in the
/// relevance analysis; k2..c3 are the hierarchical extensions.
enum class TopoField : int {
  k1 = 0,    // degree
  s1,        // strength
  kn_mean,   // neighborhood degree, mean
  kn_std,    // neighborhood degree, std
  sn_mean,   // neighborhood strength, mean
  sn_std,    // neighborhood strength, std
  c1,        // clustering coefficient
  l,         // average shortest path length
  b,         // betweenness
  k2,        // hierarchical degree, level 2
  k3,        // hierarchical degree, level 3
  s2,        // hierarchical strength, level 2
  s3,        // hierarchical strength, level 3
  c2,        // hierarchical clustering, level 2
  c3,        // hierarchical clustering, level 3
  loc,       // locality index
};

inline constexpr int kTopoFieldCount = 16;

inline const char* topo_field_name(TopoField f) {
  static constexpr const char* names[kTopoFieldCount] = {
      "k1", "s1", "kn_mean", "kn_std", "sn_mean", "sn_std", "c1", "l",
      "b",  "k2", "k3",      "s2",     "s3",      "c2",     "c3", "loc"};
  return names[static_cast<int>(f)];
}

inline std::optional<TopoField> topo_field_from_name(const std::string& name) {
  for (int i = 0; i < kTopoFieldCount; ++i)
    if (name == topo_field_name(static_cast<TopoField>(i)))
      return static_cast<TopoField>(i);
  return std::nullopt;
}

/// The ten first-level measurements.
inline std::vector<TopoField> default_topo_fields() {
  return {TopoField::k1, TopoField::s1, TopoField::kn_mean, TopoField::kn_std,
          TopoField::sn_mean, TopoField::sn_std, TopoField::c1, TopoField::l,
          TopoField::b, TopoField::loc};
}

/// All sixteen, hierarchical measurements included.
inline std::vector<TopoField> extended_topo_fields() {
  std::vector<TopoField> out;
  for (int i = 0; i < kTopoFieldCount; ++i) out.push_back(static_cast<TopoField>(i));
  return out;
}

/// Per-node measurement vector with availability flags (isolated nodes have
/// no neighborhood statistics; path length needs a component of size >= 2).
struct TopoVector {
  std::array<double, kTopoFieldCount> value{};
  std::array<bool, kTopoFieldCount> available{};

  double get(TopoField f) const { return value[static_cast<int>(f)]; }
  bool has(TopoField f) const { return available[static_cast<int>(f)]; }
  void set(TopoField f, double v) {
    value[static_cast<int>(f)] = v;
    available[static_cast<int>(f)] = true;
  }
  void unset(TopoField f) {
    value[static_cast<int>(f)] = 0.0;
    available[static_cast<int>(f)] = false;
  }
};

/// Shortest-path distance convention. Hops is the default; weighted uses
/// edge cost 1/w and affects l and b only.
enum class PathMode { hops, weighted };

// ---------------------------------------------------------------------------
// First-level measurements

inline double degree(const CollabNetwork& net, NodeId v) {
  return static_cast<double>(net.neighbors(v).size());
}

inline double strength(const CollabNetwork& net, NodeId v) {
  double s = 0.0;
  for (const auto& [u, w] : net.neighbors(v)) {
    (void)u;
    s += w;
  }
  return s;
}

struct NeighborhoodStats {
  double kn_mean = 0.0, kn_std = 0.0, sn_mean = 0.0, sn_std = 0.0;
};

/// Mean and population std of the neighbors' degree and strength.
/// Requires degree(v) >= 1.
inline NeighborhoodStats neighborhood_stats(const CollabNetwork& net, NodeId v) {
  const auto& nbrs = net.neighbors(v);
  if (nbrs.empty()) throw Error("neighborhood_stats: isolated node");
  NeighborhoodStats st;
  const double n = static_cast<double>(nbrs.size());
  for (const auto& [u, w] : nbrs) {
    (void)w;
    st.kn_mean += degree(net, u);
    st.sn_mean += strength(net, u);
  }
  st.kn_mean /= n;
  st.sn_mean /= n;
  double vk = 0.0, vs = 0.0;
  for (const auto& [u, w] : nbrs) {
    (void)w;
    vk += (degree(net, u) - st.kn_mean) * (degree(net, u) - st.kn_mean);
    vs += (strength(net, u) - st.sn_mean) * (strength(net, u) - st.sn_mean);
  }
  st.kn_std = std::sqrt(vk / n);
  st.sn_std = std::sqrt(vs / n);
  return st;
}

/// Local clustering coefficient: edges among neighbors over the possible
/// pairs; 0 whenever fewer than two neighbors.
inline double clustering(const CollabNetwork& net, NodeId v) {
  const auto& nbrs = net.neighbors(v);
  const std::size_t k = nbrs.size();
  if (k < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (net.adjacent(nbrs[a].first, nbrs[b].first)) ++links;
  return static_cast<double>(links) / (static_cast<double>(k) * (k - 1) / 2.0);
}

// ---------------------------------------------------------------------------
// Shortest-path machinery

namespace detail {

constexpr int kUnreached = -1;

/// BFS distances (hops) plus shortest-path counts from a source.
struct PathCounts {
  std::vector<int> dist;
  std::vector<std::uint64_t> sigma;
};

inline PathCounts bfs_paths(const CollabNetwork& net, NodeId src) {
  PathCounts pc;
  pc.dist.assign(net.node_count(), kUnreached);
  pc.sigma.assign(net.node_count(), 0);
  pc.dist[src] = 0;
  pc.sigma[src] = 1;
  std::queue<NodeId> q;
  q.push(src);
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (const auto& [u, w] : net.neighbors(v)) {
      (void)w;
      if (pc.dist[u] == kUnreached) {
        pc.dist[u] = pc.dist[v] + 1;
        q.push(u);
      }
      if (pc.dist[u] == pc.dist[v] + 1) pc.sigma[u] += pc.sigma[v];
    }
  }
  return pc;
}

/// Dijkstra with edge cost 1/w and minimal-cost path counts. Cost equality
/// uses a 1e-12 relative tolerance.
struct WeightedPathCounts {
  std::vector<double> dist;
  std::vector<double> sigma;
};

inline bool cost_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

inline WeightedPathCounts dijkstra_paths(const CollabNetwork& net, NodeId src) {
  const double inf = std::numeric_limits<double>::infinity();
  WeightedPathCounts pc;
  pc.dist.assign(net.node_count(), inf);
  pc.sigma.assign(net.node_count(), 0.0);
  pc.dist[src] = 0.0;
  pc.sigma[src] = 1.0;
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, src});
  std::vector<bool> done(net.node_count(), false);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = true;
    for (const auto& [u, w] : net.neighbors(v)) {
      double alt = d + 1.0 / w;
      if (alt < pc.dist[u] && !cost_equal(alt, pc.dist[u])) {
        pc.dist[u] = alt;
        pc.sigma[u] = pc.sigma[v];
        pq.push({alt, u});
      } else if (cost_equal(alt, pc.dist[u])) {
        pc.sigma[u] += pc.sigma[v];
      }
    }
  }
  return pc;
}

}  // namespace detail

/// Mean distance from v to the other nodes of its component. Unavailable
/// (nullopt) when v is alone in its component.
inline std::optional<double> avg_shortest_path(const CollabNetwork& net, NodeId v,
                                               const ComponentLabeling& comp,
                                               PathMode mode = PathMode::hops) {
  if (comp.size_of(v) < 2) return std::nullopt;
  if (mode == PathMode::hops) {
    auto pc = detail::bfs_paths(net, v);
    std::uint64_t total = 0, count = 0;
    for (NodeId u = 0; u < net.node_count(); ++u)
      if (u != v && pc.dist[u] != detail::kUnreached) {
        total += static_cast<std::uint64_t>(pc.dist[u]);
        ++count;
      }
    return static_cast<double>(total) / static_cast<double>(count);
  }
  auto pc = detail::dijkstra_paths(net, v);
  double total = 0.0;
  std::size_t count = 0;
  for (NodeId u = 0; u < net.node_count(); ++u)
    if (u != v && pc.dist[u] != std::numeric_limits<double>::infinity()) {
      total += pc.dist[u];
      ++count;
    }
  return total / static_cast<double>(count);
}

/// Sum over unordered pairs {i, j} of v's component (i != v != j) of the
/// fraction of i-j shortest paths passing through v.
inline double betweenness(const CollabNetwork& net, NodeId v, const ComponentLabeling& comp,
                          PathMode mode = PathMode::hops) {
  if (comp.size_of(v) < 3) return 0.0;
  std::vector<NodeId> members;
  for (NodeId u = 0; u < net.node_count(); ++u)
    if (comp.component_of[u] == comp.component_of[v] && u != v) members.push_back(u);

  double total = 0.0;
  if (mode == PathMode::hops) {
    const auto from_v = detail::bfs_paths(net, v);
    for (std::size_t a = 0; a < members.size(); ++a) {
      NodeId i = members[a];
      const auto from_i = detail::bfs_paths(net, i);
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        NodeId j = members[b];
        if (from_i.dist[v] + from_v.dist[j] == from_i.dist[j]) {
          std::uint64_t through = from_i.sigma[v] * from_v.sigma[j];
          total += static_cast<double>(through) / static_cast<double>(from_i.sigma[j]);
        }
      }
    }
  } else {
    const auto from_v = detail::dijkstra_paths(net, v);
    for (std::size_t a = 0; a < members.size(); ++a) {
      NodeId i = members[a];
      const auto from_i = detail::dijkstra_paths(net, i);
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        NodeId j = members[b];
        if (detail::cost_equal(from_i.dist[v] + from_v.dist[j], from_i.dist[j]))
          total += from_i.sigma[v] * from_v.sigma[j] / from_i.sigma[j];
      }
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Hierarchies

/// Rings R_h(center) = nodes at hop distance h, for h = 1..levels.
struct HierarchyView {
  NodeId center = 0;
  std::vector<std::vector<NodeId>> ring_sets;  // ring_sets[h-1] == R_h, sorted

  const std::vector<NodeId>& ring(std::size_t h) const { return ring_sets[h - 1]; }

  /// Indicator of R_h over all nodes.
  std::vector<std::uint8_t> nu_indicator(std::size_t h, std::size_t n_nodes) const {
    std::vector<std::uint8_t> out(n_nodes, 0);
    for (NodeId v : ring_sets[h - 1]) out[v] = 1;
    return out;
  }

  /// Indicator of the ball of radius h (center plus rings 1..h).
  std::vector<std::uint8_t> rho_indicator(std::size_t h, std::size_t n_nodes) const {
    std::vector<std::uint8_t> out(n_nodes, 0);
    out[center] = 1;
    for (std::size_t k = 1; k <= h && k <= ring_sets.size(); ++k)
      for (NodeId v : ring_sets[k - 1]) out[v] = 1;
    return out;
  }
};

inline HierarchyView hierarchy(const CollabNetwork& net, NodeId v, std::size_t h_max) {
  if (h_max < 1) throw Error("hierarchy: h_max must be >= 1");
  auto pc = detail::bfs_paths(net, v);
  HierarchyView view;
  view.center = v;
  view.ring_sets.assign(h_max, {});
  for (NodeId u = 0; u < net.node_count(); ++u)
    if (u != v && pc.dist[u] != detail::kUnreached &&
        static_cast<std::size_t>(pc.dist[u]) <= h_max)
      view.ring_sets[pc.dist[u] - 1].push_back(u);
  return view;  // ring members ascend because u does
}

struct HierarchicalMeasures {
  double k = 0.0;  // boundary edges leaving the collapsed ball into R_level
  double s = 0.0;  // their total weight
  double c = 0.0;  // clustering of the collapsed supernode
};

/// Collapse the ball of radius level-1 around the view's center into a single
/// node and measure it: degree counts the distinct edges crossing into
/// R_level, strength sums their weights, clustering looks at edges among
/// R_level members.
inline HierarchicalMeasures hierarchical_measures(const CollabNetwork& net,
                                                  const HierarchyView& view, std::size_t level) {
  if (level < 2 || level > view.ring_sets.size())
    throw Error("hierarchical_measures: view lacks rings for level " + std::to_string(level));
  HierarchicalMeasures out;
  const auto inside = view.rho_indicator(level - 1, net.node_count());
  std::vector<std::uint8_t> in_ring(net.node_count(), 0);
  for (NodeId u : view.ring(level)) in_ring[u] = 1;

  for (NodeId u = 0; u < net.node_count(); ++u) {
    if (!inside[u]) continue;
    for (const auto& [w_node, w] : net.neighbors(u)) {
      if (in_ring[w_node]) {
        out.k += 1.0;
        out.s += w;
      }
    }
  }
  const auto& ring = view.ring(level);
  if (ring.size() >= 2) {
    std::size_t links = 0;
    for (std::size_t a = 0; a < ring.size(); ++a)
      for (std::size_t b = a + 1; b < ring.size(); ++b)
        if (net.adjacent(ring[a], ring[b])) ++links;
    out.c = static_cast<double>(links) /
            (static_cast<double>(ring.size()) * (ring.size() - 1) / 2.0);
  }
  return out;
}

/// Fraction of a node's reach located at the first hierarchy: k1/(k1+k2).
/// Unavailable (nullopt) when both are zero.
inline std::optional<double> locality_index(double k1, double k2) {
  if (k1 + k2 <= 0.0) return std::nullopt;
  return k1 / (k1 + k2);
}

// ---------------------------------------------------------------------------
// Assembly

/// All sixteen measurements for one node, with availability flags.
inline TopoVector topo_vector(const CollabNetwork& net, NodeId v, const ComponentLabeling& comp,
                              PathMode mode = PathMode::hops) {
  TopoVector tv;
  const double k1 = degree(net, v);
  tv.set(TopoField::k1, k1);
  tv.set(TopoField::s1, strength(net, v));
  if (k1 >= 1.0) {
    auto st = neighborhood_stats(net, v);
    tv.set(TopoField::kn_mean, st.kn_mean);
    tv.set(TopoField::kn_std, st.kn_std);
    tv.set(TopoField::sn_mean, st.sn_mean);
    tv.set(TopoField::sn_std, st.sn_std);
  }
  tv.set(TopoField::c1, clustering(net, v));
  if (auto l = avg_shortest_path(net, v, comp, mode)) tv.set(TopoField::l, *l);
  if (comp.size_of(v) >= 2) tv.set(TopoField::b, betweenness(net, v, comp, mode));

  auto view = hierarchy(net, v, 3);
  auto h2 = hierarchical_measures(net, view, 2);
  auto h3 = hierarchical_measures(net, view, 3);
  tv.set(TopoField::k2, h2.k);
  tv.set(TopoField::s2, h2.s);
  tv.set(TopoField::c2, h2.c);
  tv.set(TopoField::k3, h3.k);
  tv.set(TopoField::s3, h3.s);
  tv.set(TopoField::c3, h3.c);
  if (auto loc = locality_index(k1, h2.k)) tv.set(TopoField::loc, *loc);
  return tv;
}

}  // namespace disamb
