#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowbal/digraph.hpp"
#include "flowbal/rational.hpp"

namespace flowbal {

/// Integer interval [lo, hi]; empty when lo > hi.
struct IntInterval {
  Flow lo = 0;
  Flow hi = 0;

  bool empty() const noexcept { return lo > hi; }
  bool contains(Flow f) const noexcept { return lo <= f && f <= hi; }
  Flow clamp(Flow f) const noexcept { return std::max(lo, std::min(hi, f)); }

  friend bool operator==(const IntInterval&, const IntInterval&) = default;
};

/// Per-edge lower and upper flow limits, indexed by EdgeId.
/// Construction enforces 0 < l <= u on every edge.
class FlowBounds {
 public:
  FlowBounds() = default;

  FlowBounds(const Digraph& g, std::vector<Rational> lower, std::vector<Rational> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != g.edge_count() || upper_.size() != g.edge_count()) {
      throw std::invalid_argument("bounds must be given for every edge exactly once");
    }
    for (EdgeId e = 0; e < lower_.size(); ++e) {
      if (lower_[e] <= Rational(0)) {
        throw std::invalid_argument("lower limit of " + edge_label(g.edge(e)) +
                                    " must be positive, got " + lower_[e].to_string());
      }
      if (upper_[e] < lower_[e]) {
        throw std::invalid_argument("upper limit of " + edge_label(g.edge(e)) + " (" +
                                    upper_[e].to_string() + ") is below its lower limit (" +
                                    lower_[e].to_string() + ")");
      }
    }
  }

  /// Same [lo, hi] on every edge.
  static FlowBounds uniform(const Digraph& g, Rational lo, Rational hi) {
    return FlowBounds(g, std::vector<Rational>(g.edge_count(), lo),
                      std::vector<Rational>(g.edge_count(), hi));
  }

  std::size_t size() const noexcept { return lower_.size(); }
  const Rational& lower(EdgeId e) const { return lower_.at(e); }
  const Rational& upper(EdgeId e) const { return upper_.at(e); }

  /// [ceil(l), floor(u)] for edge e.
  IntInterval integer_interval(EdgeId e) const { return {lower_.at(e).ceil(), upper_.at(e).floor()}; }

  std::vector<IntInterval> integer_intervals() const {
    std::vector<IntInterval> out;
    out.reserve(size());
    for (EdgeId e = 0; e < size(); ++e) out.push_back(integer_interval(e));
    return out;
  }

  friend bool operator==(const FlowBounds&, const FlowBounds&) = default;

 private:
  std::vector<Rational> lower_;
  std::vector<Rational> upper_;
};

/// Integer flow per edge, indexed by EdgeId.
struct FlowAssignment {
  std::vector<Flow> flow;

  friend bool operator==(const FlowAssignment&, const FlowAssignment&) = default;
};

/// In-flow minus out-flow at every node.
inline std::vector<Flow> node_balances(const Digraph& g, const std::vector<Flow>& flow) {
  std::vector<Flow> b(g.size(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    b[g.edge(e).to] += flow[e];
    b[g.edge(e).from] -= flow[e];
  }
  return b;
}

/// Every flow lies in its integer interval and every node is balanced.
inline bool is_balanced_feasible(const Digraph& g, const FlowBounds& b, const FlowAssignment& f) {
  if (f.flow.size() != g.edge_count()) return false;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!b.integer_interval(e).contains(f.flow[e])) return false;
  }
  const auto bal = node_balances(g, f.flow);
  return std::all_of(bal.begin(), bal.end(), [](Flow x) { return x == 0; });
}

}  // namespace flowbal
