#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "disamb/corpus.hpp"
#include "disamb/error.hpp"
#include "disamb/util.hpp"

namespace disamb {

using NodeId = std::size_t;

/// Weighted undirected collaboration network. Every occurrence of the
/// disputed alias is a separate persona node; every other alias is one merged
/// node across all papers.
class CollabNetwork {
 public:
  struct Node {
    std::string label;
    bool is_persona = false;
    std::string paper_id;                // persona nodes only
    std::optional<std::string> entity;   // persona nodes only, gold mode
  };

  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(NodeId v) const { return nodes_[v]; }
  const std::vector<Node>& nodes() const { return nodes_; }

  /// Neighbors of v with edge weights, sorted by neighbor id.
  const std::vector<std::pair<NodeId, double>>& neighbors(NodeId v) const { return adj_[v]; }

  double weight(NodeId i, NodeId j) const {
    const auto& row = adj_[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const auto& e, NodeId key) { return e.first < key; });
    return (it != row.end() && it->first == j) ? it->second : 0.0;
  }

  bool adjacent(NodeId i, NodeId j) const { return weight(i, j) > 0.0; }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& row : adj_) m += row.size();
    return m / 2;
  }

  double total_weight() const {
    double s = 0.0;
    for (NodeId v = 0; v < adj_.size(); ++v)
      for (const auto& [u, w] : adj_[v])
        if (u > v) s += w;
    return s;
  }

  /// Persona node for one occurrence of the disputed alias.
  std::optional<NodeId> persona_node(const std::string& paper_id) const {
    auto it = persona_by_paper_.find(paper_id);
    if (it == persona_by_paper_.end()) return std::nullopt;
    return it->second;
  }

  /// Merged node of a non-disputed alias.
  std::optional<NodeId> merged_node(const std::string& alias) const {
    auto it = merged_by_alias_.find(alias);
    if (it == merged_by_alias_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& disputed_alias() const { return disputed_; }

  std::vector<NodeId> persona_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < nodes_.size(); ++v)
      if (nodes_[v].is_persona) out.push_back(v);
    return out;
  }

  std::vector<NodeId> merged_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < nodes_.size(); ++v)
      if (!nodes_[v].is_persona) out.push_back(v);
    return out;
  }

  /// Direct construction from an explicit weighted edge list. Mainly for
  /// tests and oracle graphs; labels default to the node index.
  static CollabNetwork from_edges(std::size_t n_nodes,
                                  const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
    CollabNetwork net;
    net.nodes_.resize(n_nodes);
    for (NodeId v = 0; v < n_nodes; ++v) net.nodes_[v].label = "n" + std::to_string(v);
    std::map<std::pair<NodeId, NodeId>, double> acc;
    for (const auto& [a, b, w] : edges) {
      if (a == b) throw Error("self edge " + std::to_string(a));
      if (a >= n_nodes || b >= n_nodes) throw Error("edge endpoint out of range");
      acc[{std::min(a, b), std::max(a, b)}] += w;
    }
    net.materialize(acc);
    return net;
  }

  friend CollabNetwork build_network(const std::vector<PaperRecord>&, const std::string&);

 private:
  void materialize(const std::map<std::pair<NodeId, NodeId>, double>& acc) {
    adj_.assign(nodes_.size(), {});
    for (const auto& [key, w] : acc) {
      if (w <= 0.0) continue;
      adj_[key.first].emplace_back(key.second, w);
      adj_[key.second].emplace_back(key.first, w);
    }
    for (auto& row : adj_) std::sort(row.begin(), row.end());
  }

  std::vector<Node> nodes_;
  std::vector<std::vector<std::pair<NodeId, double>>> adj_;
  std::map<std::string, NodeId> persona_by_paper_;
  std::map<std::string, NodeId> merged_by_alias_;
  std::string disputed_;
};

/// Build the network for one disputed alias: w_ij accumulates 1/(paper author
/// count) over the papers where i and j co-author.
inline CollabNetwork build_network(const std::vector<PaperRecord>& corpus,
                                   const std::string& disputed) {
  CollabNetwork net;
  net.disputed_ = disputed;
  bool found = false;
  std::map<std::pair<NodeId, NodeId>, double> acc;
  for (const auto& rec : corpus) {
    std::vector<NodeId> paper_nodes;
    paper_nodes.reserve(rec.aliases.size());
    for (std::size_t i = 0; i < rec.aliases.size(); ++i) {
      const auto& alias = rec.aliases[i];
      if (alias == disputed) {
        found = true;
        CollabNetwork::Node node;
        node.label = alias + "@" + rec.paper_id;
        node.is_persona = true;
        node.paper_id = rec.paper_id;
        if (rec.entities) node.entity = (*rec.entities)[i];
        NodeId id = net.nodes_.size();
        net.nodes_.push_back(std::move(node));
        net.persona_by_paper_[rec.paper_id] = id;
        paper_nodes.push_back(id);
      } else {
        auto it = net.merged_by_alias_.find(alias);
        NodeId id;
        if (it == net.merged_by_alias_.end()) {
          id = net.nodes_.size();
          CollabNetwork::Node node;
          node.label = alias;
          net.nodes_.push_back(std::move(node));
          net.merged_by_alias_[alias] = id;
        } else {
          id = it->second;
        }
        paper_nodes.push_back(id);
      }
    }
    const double share = 1.0 / static_cast<double>(rec.aliases.size());
    for (std::size_t a = 0; a < paper_nodes.size(); ++a)
      for (std::size_t b = a + 1; b < paper_nodes.size(); ++b) {
        NodeId i = paper_nodes[a], j = paper_nodes[b];
        acc[{std::min(i, j), std::max(i, j)}] += share;
      }
  }
  if (!found) throw ValidationError("disputed alias '" + disputed + "' absent from corpus");
  net.materialize(acc);
  return net;
}

/// Connected components of the binary adjacency.
struct ComponentLabeling {
  std::vector<std::size_t> component_of;
  std::vector<std::size_t> component_sizes;

  std::size_t size_of(NodeId v) const { return component_sizes[component_of[v]]; }
};

inline ComponentLabeling components(const CollabNetwork& net) {
  ComponentLabeling out;
  const std::size_t n = net.node_count();
  out.component_of.assign(n, static_cast<std::size_t>(-1));
  for (NodeId start = 0; start < n; ++start) {
    if (out.component_of[start] != static_cast<std::size_t>(-1)) continue;
    std::size_t comp = out.component_sizes.size();
    std::size_t size = 0;
    std::queue<NodeId> q;
    q.push(start);
    out.component_of[start] = comp;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      ++size;
      for (const auto& [u, w] : net.neighbors(v)) {
        (void)w;
        if (out.component_of[u] == static_cast<std::size_t>(-1)) {
          out.component_of[u] = comp;
          q.push(u);
        }
      }
    }
    out.component_sizes.push_back(size);
  }
  return out;
}

/// Edge-list dump with a node-table header; deterministic ordering.
inline void dump_network(const CollabNetwork& net, std::ostream& out) {
  out << "# nodes\n";
  for (NodeId v = 0; v < net.node_count(); ++v)
    out << v << '\t' << net.node(v).label << '\n';
  out << "# edges\n";
  for (NodeId v = 0; v < net.node_count(); ++v)
    for (const auto& [u, w] : net.neighbors(v))
      if (u > v) out << v << '\t' << u << '\t' << format_double(w) << '\n';
}

}  // namespace disamb
