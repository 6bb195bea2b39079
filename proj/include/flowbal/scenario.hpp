#pragma once

#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "flowbal/bounds.hpp"
#include "flowbal/digraph.hpp"
#include "flowbal/network.hpp"

namespace flowbal {

enum class Algorithm : std::uint8_t {
  delay_tolerant,  // exchanges change amounts; tolerates bounded delays
  drop_resilient,  // exchanges desired and new flows; tolerates packet drops
};

inline const char* to_string(Algorithm a) { return a == Algorithm::delay_tolerant ? "alg1" : "alg2"; }

/// Everything needed to reproduce one run.
struct Scenario {
  Digraph graph;
  FlowBounds bounds;
  Algorithm algorithm = Algorithm::delay_tolerant;
  ChannelConfig channel;
  std::uint64_t seed = 0;
  std::int64_t max_iterations = 0;  // 0: default_iteration_budget()
  int window = 0;                   // 0: smallest admissible quiescence window
  std::map<NodeId, std::vector<EdgeId>> edge_order;
  bool allow_infeasible = false;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr int kScenarioFormatVersion = 1;

/// Largest delay bound over all link directions.
inline int max_delay_bound(const Scenario& sc) {
  if (!sc.channel.uses_delay()) return 0;
  int m = sc.channel.max_delay;
  for (const auto& [k, v] : sc.channel.delay_bound) m = std::max(m, v);
  return m;
}

/// Smallest quiescence window the termination check accepts.
inline int min_window(Algorithm a, int max_delay) {
  return a == Algorithm::delay_tolerant ? max_delay + 1 : 1;
}

inline int effective_window(const Scenario& sc) {
  return sc.window > 0 ? sc.window : min_window(sc.algorithm, max_delay_bound(sc));
}

/// 10 * n * max(tau, 1) * sum over edges of (floor(u) - ceil(l) + 1).
inline std::int64_t default_iteration_budget(const Scenario& sc) {
  std::int64_t width = 0;
  for (EdgeId e = 0; e < sc.bounds.size(); ++e) {
    const auto iv = sc.bounds.integer_interval(e);
    width += std::max<std::int64_t>(iv.hi - iv.lo + 1, 1);
  }
  const std::int64_t tau = std::max(max_delay_bound(sc), 1);
  return 10 * static_cast<std::int64_t>(sc.graph.size()) * tau * std::max<std::int64_t>(width, 1);
}

inline std::int64_t effective_max_iterations(const Scenario& sc) {
  return sc.max_iterations > 0 ? sc.max_iterations : default_iteration_budget(sc);
}

namespace detail {

inline std::string format_probability(double q) {
  std::ostringstream os;
  os << std::setprecision(17) << q;
  return os.str();
}

inline std::string link_text(LinkKey l) { return std::to_string(l.src + 1) + " -> " + std::to_string(l.dst + 1); }

}  // namespace detail

/// Canonical text form of a scenario (the scenario file format). Parsing the
/// output yields an equal Scenario.
inline std::string serialize(const Scenario& sc) {
  std::ostringstream os;
  os << "flowbal-scenario " << kScenarioFormatVersion << "\n";
  os << "\n[graph]\n";
  os << "nodes = " << sc.graph.size() << "\n";
  for (const auto& e : sc.graph.edges()) os << "edge " << e.from + 1 << " -> " << e.to + 1 << "\n";

  os << "\n[bounds]\n";
  for (EdgeId e = 0; e < sc.graph.edge_count(); ++e) {
    const auto& ed = sc.graph.edge(e);
    os << ed.from + 1 << " -> " << ed.to + 1 << " = " << sc.bounds.lower(e) << " " << sc.bounds.upper(e) << "\n";
  }

  const auto& ch = sc.channel;
  os << "\n[channel]\n";
  os << "kind = " << to_string(ch.kind) << "\n";
  if (ch.uses_delay()) os << "max_delay = " << ch.max_delay << "\n";
  if (ch.uses_drop()) os << "drop = " << detail::format_probability(ch.drop_probability) << "\n";
  for (const auto& [l, v] : ch.delay_bound) os << "delay " << detail::link_text(l) << " = " << v << "\n";
  for (const auto& [l, v] : ch.drop_q) {
    os << "drop " << detail::link_text(l) << " = " << detail::format_probability(v) << "\n";
  }
  for (const auto& [l, sched] : ch.delay_schedule) {
    os << "schedule " << detail::link_text(l) << " =";
    for (int d : sched) os << " " << d;
    os << "\n";
  }

  os << "\n[run]\n";
  os << "algorithm = " << to_string(sc.algorithm) << "\n";
  os << "seed = " << sc.seed << "\n";
  os << "max_iterations = " << sc.max_iterations << "\n";
  os << "window = " << sc.window << "\n";
  os << "allow_infeasible = " << (sc.allow_infeasible ? "true" : "false") << "\n";

  if (!sc.edge_order.empty()) {
    os << "\n[order]\n";
    for (const auto& [v, ids] : sc.edge_order) {
      os << v + 1 << " =";
      for (EdgeId e : ids) {
        const auto& ed = sc.graph.edge(e);
        os << " " << ed.from + 1 << "->" << ed.to + 1;
      }
      os << "\n";
    }
  }
  return os.str();
}

/// FNV-1a 64 over the canonical serialization.
inline std::uint64_t fingerprint(const Scenario& sc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize(sc)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

}  // namespace flowbal
