#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bethe/branching.hpp"
#include "bethe/error.hpp"

namespace bethe {

using NodeId = std::size_t;
inline constexpr std::size_t kNoGroup = static_cast<std::size_t>(-1);

// Rooted graph in breadth-first layout. Node 0 is the root; nodes of each
// generation are contiguous, and the children of a node are contiguous and
// ordered by creation.
class TreeGraph {
 public:
  TreeGraph() = default;

  [[nodiscard]] std::size_t n_nodes() const { return depth_of_.size(); }
  [[nodiscard]] int depth() const { return depth_; }
  [[nodiscard]] std::size_t edge_count() const { return neighbors_.size() / 2; }

  [[nodiscard]] int depth_of(NodeId u) const { return depth_of_[u]; }
  [[nodiscard]] const std::vector<int>& depths() const { return depth_of_; }

  [[nodiscard]] std::span<const NodeId> neighbors(NodeId u) const {
    return {neighbors_.data() + neighbor_offsets_[u], neighbor_offsets_[u + 1] - neighbor_offsets_[u]};
  }
  [[nodiscard]] std::size_t degree(NodeId u) const { return neighbor_offsets_[u + 1] - neighbor_offsets_[u]; }

  // Child range [first, last) in node ids.
  [[nodiscard]] std::pair<NodeId, NodeId> children(NodeId u) const { return {child_begin_[u], child_end_[u]}; }
  [[nodiscard]] std::size_t child_count(NodeId u) const { return child_end_[u] - child_begin_[u]; }
  [[nodiscard]] NodeId parent(NodeId u) const { return parent_[u]; }

  // Node range [first, last) of generation g.
  [[nodiscard]] std::pair<NodeId, NodeId> level(int g) const {
    return {level_offsets_[static_cast<std::size_t>(g)], level_offsets_[static_cast<std::size_t>(g) + 1]};
  }

  // Clique id for fan nodes, kNoGroup for the root and for tree kinds.
  [[nodiscard]] std::size_t sibling_group(NodeId u) const { return sibling_group_[u]; }
  [[nodiscard]] bool has_sibling_groups() const { return has_groups_; }

  // Sorted (u < v) edge list.
  [[nodiscard]] std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < n_nodes(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const TreeGraph& a, const TreeGraph& b) {
    return a.depth_of_ == b.depth_of_ && a.neighbor_offsets_ == b.neighbor_offsets_ && a.neighbors_ == b.neighbors_;
  }

  // Assembles the graph from a BFS-ordered node list. parent[0] is ignored.
  static TreeGraph from_parts(std::vector<int> depth_of, std::vector<NodeId> parent,
                              const std::vector<std::pair<NodeId, NodeId>>& edges,
                              std::vector<std::size_t> sibling_group, bool has_groups) {
    TreeGraph g;
    const std::size_t n = depth_of.size();
    g.depth_of_ = std::move(depth_of);
    g.parent_ = std::move(parent);
    g.sibling_group_ = std::move(sibling_group);
    g.has_groups_ = has_groups;
    g.depth_ = n ? *std::max_element(g.depth_of_.begin(), g.depth_of_.end()) : 0;

    g.level_offsets_.assign(static_cast<std::size_t>(g.depth_) + 2, 0);
    for (NodeId u = 0; u < n; ++u) {
      if (u > 0 && g.depth_of_[u] < g.depth_of_[u - 1]) throw ConsistencyError("node ordering is not breadth-first");
      ++g.level_offsets_[static_cast<std::size_t>(g.depth_of_[u]) + 1];
    }
    std::partial_sum(g.level_offsets_.begin(), g.level_offsets_.end(), g.level_offsets_.begin());

    std::vector<std::size_t> deg(n, 0);
    for (auto [u, v] : edges) {
      if (u == v) throw ConsistencyError("self loop at node " + std::to_string(u));
      ++deg[u];
      ++deg[v];
    }
    g.neighbor_offsets_.assign(n + 1, 0);
    for (NodeId u = 0; u < n; ++u) g.neighbor_offsets_[u + 1] = g.neighbor_offsets_[u] + deg[u];
    g.neighbors_.resize(g.neighbor_offsets_[n]);
    std::vector<std::size_t> fill(g.neighbor_offsets_.begin(), g.neighbor_offsets_.end() - 1);
    for (auto [u, v] : edges) {
      g.neighbors_[fill[u]++] = v;
      g.neighbors_[fill[v]++] = u;
    }
    for (NodeId u = 0; u < n; ++u)
      std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.neighbor_offsets_[u]),
                g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.neighbor_offsets_[u + 1]));

    // children: neighbours one generation deeper whose parent is u
    g.child_begin_.assign(n, 0);
    g.child_end_.assign(n, 0);
    for (NodeId u = 0; u < n; ++u) {
      NodeId first = n, last = 0;
      for (NodeId v : g.neighbors(u))
        if (g.depth_of_[v] == g.depth_of_[u] + 1 && g.parent_[v] == u) {
          first = std::min(first, v);
          last = std::max(last, v + 1);
        }
      if (first < last) {
        g.child_begin_[u] = first;
        g.child_end_[u] = last;
      } else {
        g.child_begin_[u] = g.child_end_[u] = 0;
      }
    }
    return g;
  }

 private:
  int depth_ = 0;
  std::vector<int> depth_of_;
  std::vector<NodeId> parent_;
  std::vector<std::size_t> neighbor_offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<NodeId> child_begin_, child_end_;
  std::vector<std::size_t> level_offsets_;
  std::vector<std::size_t> sibling_group_;
  bool has_groups_ = false;
};

inline TreeGraph build_fan_graph(int k, int d, int depth) {
  BranchingSpec::fan(k, d).validate(depth);
  std::vector<int> depth_of{0};
  std::vector<NodeId> parent{0};
  std::vector<std::size_t> group{kNoGroup};
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t next_group = 0;
  NodeId frontier_begin = 0, frontier_end = 1;
  for (int g = 1; g <= depth; ++g) {
    for (NodeId p = frontier_begin; p < frontier_end; ++p) {
      for (int c = 0; c < k; ++c) {
        const NodeId first = depth_of.size();
        for (int j = 0; j < d - 1; ++j) {
          const NodeId u = depth_of.size();
          depth_of.push_back(g);
          parent.push_back(p);
          group.push_back(next_group);
          edges.emplace_back(p, u);
          for (NodeId w = first; w < u; ++w) edges.emplace_back(w, u);
        }
        ++next_group;
      }
    }
    frontier_begin = frontier_end;
    frontier_end = depth_of.size();
  }
  // A d = 2 fan is an ordinary tree; cliques are singletons.
  const bool grouped = d > 2;
  if (!grouped) std::fill(group.begin(), group.end(), kNoGroup);
  return TreeGraph::from_parts(std::move(depth_of), std::move(parent), edges, std::move(group), grouped);
}

inline TreeGraph build_tree(const BranchingSpec& spec, int depth) {
  spec.validate(depth);
  if (spec.is<Fan>()) return build_fan_graph(spec.as<Fan>().k, spec.as<Fan>().d, depth);
  const auto expected = node_count_closed(spec, depth);
  std::vector<int> depth_of{0};
  std::vector<NodeId> parent{0};
  depth_of.reserve(expected);
  parent.reserve(expected);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(expected);
  NodeId frontier_begin = 0, frontier_end = 1;
  for (int g = 0; g < depth; ++g) {
    const int c = spec.children_at(g);
    for (NodeId p = frontier_begin; p < frontier_end; ++p)
      for (int j = 0; j < c; ++j) {
        const NodeId u = depth_of.size();
        depth_of.push_back(g + 1);
        parent.push_back(p);
        edges.emplace_back(p, u);
      }
    frontier_begin = frontier_end;
    frontier_end = depth_of.size();
  }
  const std::size_t n = depth_of.size();
  return TreeGraph::from_parts(std::move(depth_of), std::move(parent), edges, std::vector<std::size_t>(n, kNoGroup),
                               false);
}

// BFS distances from the root; used to check depth metadata.
inline std::vector<int> bfs_distances(const TreeGraph& g) {
  std::vector<int> dist(g.n_nodes(), -1);
  if (g.n_nodes() == 0) return dist;
  std::queue<NodeId> q;
  dist[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId v : g.neighbors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Edge-list text format:
//   n m
//   u v        (m lines, u < v, 0-indexed, BFS order)
//   depths: d0 d1 ... d_{n-1}

struct EdgeList {
  std::size_t n = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<int> depths;

  friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

inline EdgeList to_edge_list(const TreeGraph& g) { return {g.n_nodes(), g.edges(), g.depths()}; }

inline void write_edge_list(std::ostream& os, const TreeGraph& g) {
  const auto edges = g.edges();
  os << g.n_nodes() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) os << u << ' ' << v << '\n';
  os << "depths:";
  for (int d : g.depths()) os << ' ' << d;
  os << '\n';
}

inline EdgeList read_edge_list(std::istream& is) {
  EdgeList out;
  std::size_t m = 0;
  if (!(is >> out.n >> m)) throw SpecError("edge list: missing 'n m' header");
  out.edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    NodeId u = 0, v = 0;
    if (!(is >> u >> v)) throw SpecError("edge list: expected " + std::to_string(m) + " edges, read " + std::to_string(i));
    if (u >= out.n || v >= out.n) throw SpecError("edge list: node id out of range");
    out.edges.emplace_back(u, v);
  }
  std::string tag;
  if (!(is >> tag) || tag != "depths:") throw SpecError("edge list: missing 'depths:' line");
  out.depths.resize(out.n);
  for (std::size_t i = 0; i < out.n; ++i)
    if (!(is >> out.depths[i])) throw SpecError("edge list: expected " + std::to_string(out.n) + " depths");
  return out;
}

// Rebuilds a TreeGraph from an edge list. The parent of a node is its unique
// lowest-id neighbour one generation up; same-generation neighbours form
// sibling groups (fans).
inline TreeGraph from_edge_list(const EdgeList& el) {
  const std::size_t n = el.n;
  std::vector<NodeId> parent(n, n);
  std::vector<std::vector<NodeId>> same_level(n);
  bool grouped = false;
  for (auto [a, b] : el.edges) {
    const auto [u, v] = std::minmax(a, b);
    if (el.depths[v] == el.depths[u] + 1) {
      parent[v] = std::min(parent[v], u);
    } else if (el.depths[v] == el.depths[u]) {
      same_level[u].push_back(v);
      same_level[v].push_back(u);
      grouped = true;
    } else {
      throw SpecError("edge list: edge (" + std::to_string(u) + "," + std::to_string(v) + ") skips a generation");
    }
  }
  std::vector<std::size_t> group(n, kNoGroup);
  if (grouped) {
    std::size_t next = 0;
    for (NodeId u = 1; u < n; ++u) {
      if (group[u] != kNoGroup) continue;
      group[u] = next;
      for (NodeId v : same_level[u]) group[v] = next;
      ++next;
    }
  }
  parent[0] = 0;
  for (NodeId u = 1; u < n; ++u)
    if (parent[u] == n) throw SpecError("edge list: node " + std::to_string(u) + " has no parent");
  return TreeGraph::from_parts(el.depths, std::move(parent), el.edges, std::move(group), grouped);
}

}  // namespace bethe
