#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

namespace flowbal {

/// Dinic's algorithm on integer capacities. Exact; the resulting flow is
/// integral on every arc.
template <typename Cap>
  requires std::is_integral_v<Cap> && std::is_signed_v<Cap>
class MaxFlow {
 public:
  struct Arc {
    std::size_t to;
    Cap capacity;
    Cap flow;
  };

  explicit MaxFlow(std::size_t n) : adj_(n), level_(n), next_(n) {}

  /// Adds an arc and its zero-capacity reverse twin; returns the arc index.
  std::size_t add_arc(std::size_t from, std::size_t to, Cap capacity) {
    const std::size_t id = arcs_.size();
    arcs_.push_back({to, capacity, 0});
    arcs_.push_back({from, 0, 0});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  Cap solve(std::size_t source, std::size_t sink) {
    Cap total = 0;
    while (build_levels(source, sink)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (Cap pushed = augment(source, sink, std::numeric_limits<Cap>::max())) total += pushed;
    }
    return total;
  }

  Cap flow(std::size_t arc) const { return arcs_[arc].flow; }

  /// Nodes reachable from `source` in the residual network after solve();
  /// this is the source side of a minimum cut.
  std::vector<bool> source_side(std::size_t source) const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<std::size_t> stack{source};
    seen[source] = true;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto id : adj_[v]) {
        const auto& a = arcs_[id];
        if (a.capacity - a.flow > 0 && !seen[a.to]) {
          seen[a.to] = true;
          stack.push_back(a.to);
        }
      }
    }
    return seen;
  }

 private:
  bool build_levels(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[source] = 0;
    q.push(source);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (auto id : adj_[v]) {
        const auto& a = arcs_[id];
        if (a.capacity - a.flow > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[v] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  Cap augment(std::size_t v, std::size_t sink, Cap limit) {
    if (v == sink) return limit;
    for (auto& i = next_[v]; i < adj_[v].size(); ++i) {
      const auto id = adj_[v][i];
      auto& a = arcs_[id];
      if (a.capacity - a.flow <= 0 || level_[a.to] != level_[v] + 1) continue;
      if (Cap pushed = augment(a.to, sink, std::min(limit, a.capacity - a.flow))) {
        a.flow += pushed;
        arcs_[id ^ 1].flow -= pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace flowbal
