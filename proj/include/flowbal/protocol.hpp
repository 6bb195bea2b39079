#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "flowbal/bounds.hpp"
#include "flowbal/digraph.hpp"

namespace flowbal {

/// One incident edge as seen from a node.
struct Port {
  EdgeId edge = 0;
  NodeId neighbor = 0;
  bool incoming = false;  // flow enters this node; the value held is a perceived copy
  IntInterval interval;
};

/// The node's fixed cyclic ranking of its incident edges (rank = position in
/// `ranked`) and the position where the next adjustment pass starts.
struct EdgeOrder {
  std::vector<Port> ranked;
  std::size_t cursor = 0;

  std::size_t size() const noexcept { return ranked.size(); }
};

/// Local state of one node: the actual flows of its outgoing edges (which it
/// owns) and its perceived flows on its incoming edges, both stored in rank
/// order alongside the ports.
struct NodeState {
  NodeId id = 0;
  EdgeOrder order;
  std::vector<Flow> value;

  const std::vector<Port>& ports() const noexcept { return order.ranked; }

  std::size_t slot(EdgeId e) const {
    for (std::size_t p = 0; p < order.ranked.size(); ++p) {
      if (order.ranked[p].edge == e) return p;
    }
    throw std::invalid_argument("edge is not incident to " + node_label(id));
  }

  Flow out_flow(EdgeId e) const {
    const auto p = slot(e);
    if (order.ranked[p].incoming) throw std::invalid_argument("not an outgoing edge");
    return value[p];
  }

  Flow perceived_in_flow(EdgeId e) const {
    const auto p = slot(e);
    if (!order.ranked[p].incoming) throw std::invalid_argument("not an incoming edge");
    return value[p];
  }

  friend bool operator==(const NodeState& a, const NodeState& b) {
    return a.id == b.id && a.order.cursor == b.order.cursor && a.value == b.value;
  }
};

/// Default ranking: by neighbour index, incoming before outgoing for the same
/// neighbour.
inline std::vector<EdgeId> default_edge_ranking(const Digraph& g, NodeId v) {
  struct Key {
    NodeId neighbor;
    int dir;
    EdgeId edge;
  };
  std::vector<Key> keys;
  for (EdgeId e : g.in_edges(v)) keys.push_back({g.edge(e).from, 0, e});
  for (EdgeId e : g.out_edges(v)) keys.push_back({g.edge(e).to, 1, e});
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return a.neighbor != b.neighbor ? a.neighbor < b.neighbor : a.dir < b.dir;
  });
  std::vector<EdgeId> out;
  for (const auto& k : keys) out.push_back(k.edge);
  return out;
}

/// Builds a node's initial state: every incident flow (actual or perceived)
/// starts at ceil(l), cursor at rank 0. `ranking`, when given, must list each
/// incident edge exactly once.
inline NodeState make_node_state(const Digraph& g, const FlowBounds& b, NodeId v,
                                 std::optional<std::vector<EdgeId>> ranking = std::nullopt) {
  auto order = ranking ? *ranking : default_edge_ranking(g, v);
  auto expected = default_edge_ranking(g, v);
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::sort(expected.begin(), expected.end());
  if (sorted != expected) {
    throw std::invalid_argument("edge order for " + node_label(v) +
                                " must list each incident edge exactly once");
  }
  NodeState s;
  s.id = v;
  for (EdgeId e : order) {
    const auto& ed = g.edge(e);
    const bool incoming = ed.to == v;
    const auto iv = b.integer_interval(e);
    s.order.ranked.push_back({e, incoming ? ed.from : ed.to, incoming, iv});
    s.value.push_back(iv.lo);
  }
  return s;
}

/// Perceived in-flow minus actual out-flow. Exact, no projection.
inline Flow perceived_balance(const NodeState& s) {
  Flow b = 0;
  for (std::size_t p = 0; p < s.value.size(); ++p) b += s.ports()[p].incoming ? s.value[p] : -s.value[p];
  return b;
}

/// Desired per-edge change of one node: <= 0 on incoming edges, >= 0 on
/// outgoing edges. `stalled` is set when a full cyclic pass found no edge to
/// adjust while the perceived balance was still positive.
struct ChangeSet {
  std::vector<Flow> delta;
  bool stalled = false;

  bool empty() const {
    return std::all_of(delta.begin(), delta.end(), [](Flow d) { return d == 0; });
  }
};

/// Absolute desired flow per incident edge (rank order).
struct DesiredFlowSet {
  std::vector<Flow> desired;
  bool stalled = false;
};

namespace detail {

// Unit adjustments in rank order starting at the cursor: +1 on an outgoing
// edge below its max, -1 on an incoming edge above its min, saturated edges
// skipped, until the perceived balance reaches zero. Leaves the cursor one
// past the last edge visited.
inline ChangeSet round_robin_walk(NodeState& s) {
  const std::size_t degree = s.order.size();
  ChangeSet cs{std::vector<Flow>(degree, 0), false};
  Flow balance = perceived_balance(s);
  if (balance <= 0 || degree == 0) return cs;

  std::size_t pos = s.order.cursor % degree;
  std::size_t idle = 0;
  while (balance > 0) {
    const auto& port = s.order.ranked[pos];
    const Flow tentative = s.value[pos] + cs.delta[pos];
    bool changed = false;
    if (port.incoming && tentative > port.interval.lo) {
      --cs.delta[pos];
      changed = true;
    } else if (!port.incoming && tentative < port.interval.hi) {
      ++cs.delta[pos];
      changed = true;
    }
    pos = (pos + 1) % degree;
    if (changed) {
      --balance;
      idle = 0;
    } else if (++idle == degree) {
      cs.stalled = true;
      break;
    }
  }
  s.order.cursor = pos;
  return cs;
}

}  // namespace detail

/// Selects this iteration's unit changes for a node with positive perceived
/// balance and advances its cursor. Returns an all-zero set when the
/// perceived balance is not positive.
inline ChangeSet select_changes_alg1(NodeState& s) { return detail::round_robin_walk(s); }

/// f[k+1] = f[k] + own + arrived on every incident edge, then projected onto
/// the edge's integer interval. `arrived` is indexed by rank like `own`.
inline void apply_updates_alg1(NodeState& s, const ChangeSet& own, std::span<const Flow> arrived) {
  const auto degree = s.value.size();
  if (own.delta.size() != degree || arrived.size() != degree) {
    throw std::invalid_argument("change vectors do not match the node's degree");
  }
  for (std::size_t p = 0; p < degree; ++p) {
    s.value[p] = s.ports()[p].interval.clamp(s.value[p] + own.delta[p] + arrived[p]);
  }
}

/// Desired absolute flows. With positive perceived balance this is the same
/// round-robin walk as Algorithm 1 (cursor advances); otherwise the current
/// values unchanged.
inline DesiredFlowSet select_desired_flows_alg2(NodeState& s) {
  DesiredFlowSet out{s.value, false};
  if (perceived_balance(s) <= 0) return out;
  const auto cs = detail::round_robin_walk(s);
  for (std::size_t p = 0; p < out.desired.size(); ++p) out.desired[p] += cs.delta[p];
  out.stalled = cs.stalled;
  return out;
}

/// New actual flow of each outgoing edge: f^(l) + f^(j) - f projected onto the
/// integer interval, with the out-neighbour's desired value f^(l) defaulting
/// to f when its message was lost. Entries for incoming ports are the
/// current perceived values.
inline std::vector<Flow> outgoing_update_alg2(const NodeState& s, const DesiredFlowSet& own,
                                              std::span<const std::optional<Flow>> received_out) {
  const auto degree = s.value.size();
  if (own.desired.size() != degree || received_out.size() != degree) {
    throw std::invalid_argument("desired-flow vectors do not match the node's degree");
  }
  std::vector<Flow> next = s.value;
  for (std::size_t p = 0; p < degree; ++p) {
    const auto& port = s.ports()[p];
    if (port.incoming) continue;
    const Flow theirs = received_out[p].value_or(s.value[p]);
    next[p] = port.interval.clamp(theirs + own.desired[p] - s.value[p]);
  }
  return next;
}

/// Completes an Algorithm 2 iteration for one node: outgoing edges take the
/// merged value (see outgoing_update_alg2); incoming edges take the new flow
/// announced by the owner, or this node's own desired value if that
/// announcement was lost.
inline void merge_flows_alg2(NodeState& s, const DesiredFlowSet& own,
                             std::span<const std::optional<Flow>> received_out,
                             std::span<const std::optional<Flow>> received_new_in) {
  if (received_new_in.size() != s.value.size()) {
    throw std::invalid_argument("new-flow vector does not match the node's degree");
  }
  auto next = outgoing_update_alg2(s, own, received_out);
  for (std::size_t p = 0; p < next.size(); ++p) {
    if (s.ports()[p].incoming) next[p] = received_new_in[p].value_or(own.desired[p]);
  }
  s.value = std::move(next);
}

}  // namespace flowbal
