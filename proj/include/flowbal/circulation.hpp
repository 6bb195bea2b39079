#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowbal/bounds.hpp"
#include "flowbal/digraph.hpp"
#include "flowbal/max_flow.hpp"

namespace flowbal {

/// Certificate that no balanced integer flow exists.
///
/// kind == cut: `subset` is a nonempty proper node subset whose forced
/// in-flow (sum of ceil(l) over edges entering it) exceeds the most it can
/// send out (sum of floor(u) over edges leaving it): lhs > rhs.
///
/// kind == empty_interval: edge `edge` has ceil(l) = lhs > floor(u) = rhs,
/// so it admits no integer flow at all. `subset` is empty.
struct CutWitness {
  enum class Kind { cut, empty_interval };

  Kind kind = Kind::cut;
  std::vector<NodeId> subset;  // ascending
  Flow lhs = 0;
  Flow rhs = 0;
  std::optional<EdgeId> edge;

  friend bool operator==(const CutWitness&, const CutWitness&) = default;
};

struct CirculationVerdict {
  bool feasible = false;
  std::optional<CutWitness> witness;  // set iff !feasible

  explicit operator bool() const noexcept { return feasible; }
};

/// Sum of ceil(l) over edges entering `subset` and sum of floor(u) over edges
/// leaving it.
struct CutSides {
  Flow lhs = 0;
  Flow rhs = 0;
};

inline CutSides cut_sides(const Digraph& g, const FlowBounds& b, const std::vector<bool>& in_subset) {
  CutSides s;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    const bool from_in = in_subset[ed.from];
    const bool to_in = in_subset[ed.to];
    if (to_in && !from_in) s.lhs += b.lower(e).ceil();
    if (from_in && !to_in) s.rhs += b.upper(e).floor();
  }
  return s;
}

inline CutSides cut_sides(const Digraph& g, const FlowBounds& b, const std::vector<NodeId>& subset) {
  std::vector<bool> mask(g.size(), false);
  for (auto v : subset) mask.at(v) = true;
  return cut_sides(g, b, mask);
}

inline std::string describe(const CutWitness& w, const Digraph& g) {
  std::ostringstream os;
  if (w.kind == CutWitness::Kind::empty_interval) {
    os << "edge " << edge_label(g.edge(*w.edge)) << " has empty integer interval: ceil(l)=" << w.lhs
       << " > floor(u)=" << w.rhs;
    return os.str();
  }
  os << "S={";
  for (std::size_t i = 0; i < w.subset.size(); ++i) os << (i ? "," : "") << node_label(w.subset[i]);
  os << "}, lhs=" << w.lhs << " > rhs=" << w.rhs;
  return os.str();
}

namespace detail {

inline void require_input(const Digraph& g, const FlowBounds& b) {
  if (g.size() < 2) throw std::invalid_argument("digraph needs at least two nodes");
  if (b.size() != g.edge_count()) throw std::invalid_argument("bounds do not match the edge set");
  if (!strongly_connected(g)) throw std::invalid_argument("digraph is not strongly connected");
}

inline std::optional<CutWitness> first_empty_interval(const FlowBounds& b) {
  for (EdgeId e = 0; e < b.size(); ++e) {
    const auto iv = b.integer_interval(e);
    if (iv.empty()) return CutWitness{CutWitness::Kind::empty_interval, {}, iv.lo, iv.hi, e};
  }
  return std::nullopt;
}

/// Lower-bound circulation reduced to one s-t max-flow. Each edge becomes an
/// arc of capacity floor(u) - ceil(l); the forced ceil(l) units are injected
/// as node excesses served from a super source / drained into a super sink.
struct CirculationNetwork {
  MaxFlow<Flow> net;
  std::vector<std::size_t> edge_arc;
  std::size_t source;
  std::size_t sink;
  Flow demand = 0;
  Flow max_flow = 0;

  CirculationNetwork(const Digraph& g, const FlowBounds& b)
      : net(g.size() + 2), source(g.size()), sink(g.size() + 1) {
    std::vector<Flow> excess(g.size(), 0);
    edge_arc.reserve(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto iv = b.integer_interval(e);
      const auto& ed = g.edge(e);
      edge_arc.push_back(net.add_arc(ed.from, ed.to, iv.hi - iv.lo));
      excess[ed.to] += iv.lo;
      excess[ed.from] -= iv.lo;
    }
    for (NodeId v = 0; v < g.size(); ++v) {
      if (excess[v] > 0) {
        net.add_arc(source, v, excess[v]);
        demand += excess[v];
      } else if (excess[v] < 0) {
        net.add_arc(v, sink, -excess[v]);
      }
    }
    max_flow = net.solve(source, sink);
  }

  bool saturated() const noexcept { return max_flow == demand; }
};

}  // namespace detail

/// Decides whether a balanced integer flow within [ceil(l), floor(u)] exists
/// on every edge. Infeasible verdicts carry a witness: the source side of the
/// minimum cut in the reduction (the nodes holding forced excess in-flow that
/// cannot be routed out), or the first edge with an empty integer interval.
/// Throws std::invalid_argument on a digraph that is not strongly connected.
inline CirculationVerdict check_circulation(const Digraph& g, const FlowBounds& b) {
  detail::require_input(g, b);
  if (auto w = detail::first_empty_interval(b)) return {false, std::move(w)};

  detail::CirculationNetwork cn(g, b);
  if (cn.saturated()) return {true, std::nullopt};

  const auto side = cn.net.source_side(cn.source);
  std::vector<bool> mask(g.size(), false);
  CutWitness w;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (side[v]) {
      mask[v] = true;
      w.subset.push_back(v);
    }
  }
  const auto s = cut_sides(g, b, mask);
  w.lhs = s.lhs;
  w.rhs = s.rhs;
  return {false, std::move(w)};
}

/// Exhaustive oracle for check_circulation: tests the cut inequality on all
/// 2^n - 2 nonempty proper subsets. Returns the lexicographically smallest
/// violating subset (ascending node lists compared element-wise). n <= 15.
inline CirculationVerdict brute_force_circulation(const Digraph& g, const FlowBounds& b) {
  if (g.size() > 15) throw std::invalid_argument("brute_force_circulation is limited to n <= 15");
  detail::require_input(g, b);
  if (auto w = detail::first_empty_interval(b)) return {false, std::move(w)};

  const std::size_t n = g.size();
  std::optional<CutWitness> best;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<bool> in(n, false);
    std::vector<NodeId> subset;
    for (NodeId v = 0; v < n; ++v) {
      if (mask & (1u << v)) {
        in[v] = true;
        subset.push_back(v);
      }
    }
    const auto s = cut_sides(g, b, in);
    if (s.lhs <= s.rhs) continue;
    if (!best || subset < best->subset) {
      best = CutWitness{CutWitness::Kind::cut, std::move(subset), s.lhs, s.rhs, std::nullopt};
    }
  }
  if (best) return {false, std::move(best)};
  return {true, std::nullopt};
}

/// Centralised reference solution: a balanced integer flow inside every
/// edge's integer interval. Throws std::invalid_argument on infeasible input.
inline FlowAssignment balanced_feasible_flow(const Digraph& g, const FlowBounds& b) {
  detail::require_input(g, b);
  if (auto w = detail::first_empty_interval(b)) {
    throw std::invalid_argument("no balanced integer flow: " + describe(*w, g));
  }
  detail::CirculationNetwork cn(g, b);
  if (!cn.saturated()) throw std::invalid_argument("no balanced integer flow exists");
  FlowAssignment f;
  f.flow.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    f.flow.push_back(b.integer_interval(e).lo + cn.net.flow(cn.edge_arc[e]));
  }
  return f;
}

}  // namespace flowbal
