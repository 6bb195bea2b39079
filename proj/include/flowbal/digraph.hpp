#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flowbal {

using NodeId = std::size_t;
using EdgeId = std::size_t;
using Flow = std::int64_t;

/// A directed edge carrying flow from `from` to `to`. The node at `from`
/// assigns the true flow of the edge; the node at `to` only holds a
/// perceived copy of it.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Human-readable node label, 1-based ("v1", "v2", ...).
inline std::string node_label(NodeId v) { return "v" + std::to_string(v + 1); }

inline std::string edge_label(const Edge& e) {
  return node_label(e.from) + "->" + node_label(e.to);
}

/// Simple digraph on nodes 0..n-1. Self-loops and parallel edges are rejected.
/// Edge ids are insertion indices and stay stable.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : in_(n), out_(n) {}

  Digraph(std::size_t n, const std::vector<Edge>& edges) : Digraph(n) {
    for (const auto& e : edges) add_edge(e.from, e.to);
  }

  EdgeId add_edge(NodeId from, NodeId to) {
    if (from >= size() || to >= size()) {
      throw std::out_of_range("edge endpoint out of range: " + std::to_string(from + 1) + "->" +
                              std::to_string(to + 1));
    }
    if (from == to) throw std::invalid_argument("self-loop on " + node_label(from));
    if (!index_.insert({from, to}).second) {
      throw std::invalid_argument("duplicate edge " + edge_label({from, to}));
    }
    const EdgeId id = edges_.size();
    edges_.push_back({from, to});
    out_[from].push_back(id);
    in_[to].push_back(id);
    return id;
  }

  std::size_t size() const noexcept { return in_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Edge& edge(EdgeId id) const { return edges_.at(id); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Edges whose flow enters / leaves `v`.
  const std::vector<EdgeId>& in_edges(NodeId v) const { return in_.at(v); }
  const std::vector<EdgeId>& out_edges(NodeId v) const { return out_.at(v); }

  std::size_t in_degree(NodeId v) const { return in_.at(v).size(); }
  std::size_t out_degree(NodeId v) const { return out_.at(v).size(); }
  std::size_t degree(NodeId v) const { return in_degree(v) + out_degree(v); }

  bool has_edge(NodeId from, NodeId to) const { return index_.count({from, to}) != 0; }

  /// Id of edge from->to; throws if absent.
  EdgeId find_edge(NodeId from, NodeId to) const {
    for (EdgeId id : out_.at(from)) {
      if (edges_[id].to == to) return id;
    }
    throw std::invalid_argument("no edge " + edge_label({from, to}));
  }

  /// Neighbours in the undirected communication graph, ascending and unique.
  std::vector<NodeId> neighbors(NodeId v) const {
    std::set<NodeId> s;
    for (EdgeId id : in_.at(v)) s.insert(edges_[id].from);
    for (EdgeId id : out_.at(v)) s.insert(edges_[id].to);
    return {s.begin(), s.end()};
  }

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.size() == b.size() && a.edges_ == b.edges_;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<std::vector<EdgeId>> out_;
  std::set<std::pair<NodeId, NodeId>> index_;
};

namespace detail {

inline std::size_t count_reachable(const Digraph& g, bool forward) {
  std::vector<char> seen(g.size(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto& ids = forward ? g.out_edges(v) : g.in_edges(v);
    for (EdgeId id : ids) {
      const NodeId w = forward ? g.edge(id).to : g.edge(id).from;
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace detail

/// True iff every node reaches every other node along directed edges.
inline bool strongly_connected(const Digraph& g) {
  if (g.size() == 0) return false;
  return detail::count_reachable(g, true) == g.size() &&
         detail::count_reachable(g, false) == g.size();
}

}  // namespace flowbal
