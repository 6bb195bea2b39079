#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowbal/bounds.hpp"
#include "flowbal/circulation.hpp"
#include "flowbal/network.hpp"
#include "flowbal/protocol.hpp"
#include "flowbal/scenario.hpp"

namespace flowbal {

/// Network-wide snapshot at the start of iteration k.
struct IterationRecord {
  std::int64_t k = 0;
  std::vector<Flow> flow;               // actual, per edge
  std::vector<Flow> perceived;          // perceived by the receiving node, per edge
  std::vector<Flow> balance;            // per node
  std::vector<Flow> perceived_balance;  // per node
  Flow epsilon = 0;
  Flow epsilon_perceived = 0;
  std::size_t inflight = 0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct Outcome {
  bool converged = false;
  std::int64_t k0 = -1;  // first step of the terminal quiescent stretch

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Trace {
  std::uint64_t fingerprint = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::delay_tolerant;
  int max_delay = 0;
  int window = 1;
  Digraph graph;
  std::vector<IntInterval> intervals;
  std::vector<IterationRecord> records;
  Outcome outcome;
  std::uint64_t stall_events = 0;  // round-robin passes that found nothing to adjust
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_dropped = 0;

  const IterationRecord& final_record() const { return records.back(); }

  /// Last recorded actual flows.
  FlowAssignment final_flows() const { return {records.back().flow}; }

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Builds the snapshot of all node states.
inline IterationRecord make_record(std::int64_t k, const Digraph& g, const std::vector<NodeState>& states,
                                   std::size_t inflight) {
  IterationRecord r;
  r.k = k;
  r.flow.assign(g.edge_count(), 0);
  r.perceived.assign(g.edge_count(), 0);
  for (const auto& s : states) {
    for (std::size_t p = 0; p < s.value.size(); ++p) {
      const auto& port = s.ports()[p];
      (port.incoming ? r.perceived : r.flow)[port.edge] = s.value[p];
    }
  }
  r.balance = node_balances(g, r.flow);
  r.perceived_balance.assign(g.size(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    r.perceived_balance[g.edge(e).to] += r.perceived[e];
    r.perceived_balance[g.edge(e).from] -= r.flow[e];
  }
  for (NodeId v = 0; v < g.size(); ++v) {
    r.epsilon += std::llabs(r.balance[v]);
    r.epsilon_perceived += std::llabs(r.perceived_balance[v]);
  }
  r.inflight = inflight;
  return r;
}

/// True iff the trace ends in a quiescent balanced state: epsilon = 0,
/// nothing in flight, every perceived flow equal to the actual flow, and no
/// flow (actual or perceived) changed during the last `window` iterations.
/// Throws std::invalid_argument if `window` is below tau + 1 (Algorithm 1) or
/// 1 (Algorithm 2).
inline bool termination_check(const Trace& t, int window) {
  if (window < min_window(t.algorithm, t.max_delay)) {
    throw std::invalid_argument("quiescence window " + std::to_string(window) + " below minimum " +
                                std::to_string(min_window(t.algorithm, t.max_delay)));
  }
  if (t.records.size() < static_cast<std::size_t>(window) + 1) return false;
  const auto& last = t.records.back();
  if (last.epsilon != 0 || last.inflight != 0 || last.perceived != last.flow) return false;
  for (std::size_t i = t.records.size() - 1 - window; i + 1 < t.records.size(); ++i) {
    if (t.records[i].flow != last.flow || t.records[i].perceived != last.perceived) return false;
  }
  return true;
}

class InfeasibleScenario : public std::invalid_argument {
 public:
  explicit InfeasibleScenario(const std::string& what, CutWitness w)
      : std::invalid_argument(what), witness(std::move(w)) {}
  CutWitness witness;
};

/// Lock-step simulator for one scenario.
///
/// Each iteration runs in phases separated by barriers: every node computes
/// its perceived balance and selects changes (or desired flows), messages go
/// through the channels, arrivals are collected, states are updated and
/// projected, and a record is appended. Nodes and ports are visited in a
/// fixed order so that a run is a pure function of the scenario.
class Engine {
 public:
  explicit Engine(Scenario sc)
      : sc_(std::move(sc)), network_(validated(sc_).graph, sc_.channel, sc_.seed) {
    states_.reserve(sc_.graph.size());
    for (NodeId v = 0; v < sc_.graph.size(); ++v) {
      auto it = sc_.edge_order.find(v);
      states_.push_back(make_node_state(sc_.graph, sc_.bounds, v,
                                        it == sc_.edge_order.end() ? std::nullopt
                                                                   : std::optional(it->second)));
    }
    slot_from_.resize(sc_.graph.edge_count());
    slot_to_.resize(sc_.graph.edge_count());
    for (EdgeId e = 0; e < sc_.graph.edge_count(); ++e) {
      slot_from_[e] = states_[sc_.graph.edge(e).from].slot(e);
      slot_to_[e] = states_[sc_.graph.edge(e).to].slot(e);
    }

    trace_.fingerprint = fingerprint(sc_);
    trace_.seed = sc_.seed;
    trace_.algorithm = sc_.algorithm;
    trace_.max_delay = max_delay_bound(sc_);
    trace_.window = effective_window(sc_);
    trace_.graph = sc_.graph;
    trace_.intervals = sc_.bounds.integer_intervals();
    if (trace_.window < min_window(sc_.algorithm, trace_.max_delay)) {
      throw std::invalid_argument("quiescence window below tau + 1");
    }
    trace_.records.push_back(make_record(0, sc_.graph, states_, 0));
  }

  const std::vector<NodeState>& states() const noexcept { return states_; }
  const Trace& trace() const noexcept { return trace_; }
  std::int64_t step_index() const noexcept { return k_; }

  /// Executes one iteration and appends its record.
  void step() {
    if (sc_.algorithm == Algorithm::delay_tolerant) {
      step_delay_tolerant();
    } else {
      step_drop_resilient();
    }
    ++k_;
    trace_.records.push_back(make_record(k_, sc_.graph, states_, network_.queue().size()));
  }

  /// Runs until quiescence or the iteration budget and returns the trace.
  Trace run() && {
    const std::int64_t budget = effective_max_iterations(sc_);
    while (!termination_check(trace_, trace_.window) && k_ < budget) step();
    finish();
    return std::move(trace_);
  }

 private:
  static const Scenario& validated(const Scenario& sc) {
    if (sc.graph.size() < 2) throw std::invalid_argument("scenario needs at least two nodes");
    if (sc.bounds.size() != sc.graph.edge_count()) throw std::invalid_argument("bounds do not match edges");
    if (sc.max_iterations < 0) throw std::invalid_argument("max_iterations must be positive");
    if (sc.window < 0) throw std::invalid_argument("window must be positive");
    if (sc.algorithm == Algorithm::drop_resilient && max_delay_bound(sc) != 0) {
      throw std::invalid_argument("the drop-resilient algorithm needs zero-delay channels");
    }
    const auto verdict = check_circulation(sc.graph, sc.bounds);
    if (!verdict.feasible && !sc.allow_infeasible) {
      throw InfeasibleScenario("scenario violates the circulation conditions: " +
                                   describe(*verdict.witness, sc.graph),
                               *verdict.witness);
    }
    return sc;
  }

  void finish() {
    trace_.messages_sent = network_.sent();
    trace_.messages_dropped = network_.dropped();
    if (!termination_check(trace_, trace_.window)) return;
    trace_.outcome.converged = true;
    const auto& last = trace_.records.back();
    std::size_t i = trace_.records.size() - 1;
    while (i > 0) {
      const auto& prev = trace_.records[i - 1];
      if (prev.flow != last.flow || prev.perceived != last.perceived || prev.epsilon != 0 ||
          prev.inflight != 0) {
        break;
      }
      --i;
    }
    trace_.outcome.k0 = trace_.records[i].k;
  }

  void step_delay_tolerant() {
    std::vector<ChangeSet> own(states_.size());
    for (auto& s : states_) {
      if (perceived_balance(s) > 0) {
        own[s.id] = select_changes_alg1(s);
        if (own[s.id].stalled) ++trace_.stall_events;
        for (std::size_t p = 0; p < s.value.size(); ++p) {
          const auto& port = s.ports()[p];
          network_.send({s.id, port.neighbor, port.edge, Phase::alg1_change, own[s.id].delta[p], k_}, k_);
        }
      } else {
        own[s.id].delta.assign(s.value.size(), 0);
      }
    }
    auto& queue = network_.queue();
    for (auto& s : states_) {
      std::vector<Flow> arrived(s.value.size(), 0);
      for (std::size_t p = 0; p < arrived.size(); ++p) {
        arrived[p] = collect_alg1(s.id, s.ports()[p].edge, k_, queue);
      }
      apply_updates_alg1(s, own[s.id], arrived);
    }
    queue.take_due(k_);
  }

  void step_drop_resilient() {
    const std::size_t n = states_.size();
    std::vector<DesiredFlowSet> desired(n);
    std::vector<std::vector<std::optional<Flow>>> received_out(n), received_new_in(n);
    for (auto& s : states_) {
      desired[s.id] = select_desired_flows_alg2(s);
      if (desired[s.id].stalled) ++trace_.stall_events;
      received_out[s.id].assign(s.value.size(), std::nullopt);
      received_new_in[s.id].assign(s.value.size(), std::nullopt);
    }

    // Desired flows travel from each receiving node to the edge's owner.
    for (const auto& s : states_) {
      for (std::size_t p = 0; p < s.value.size(); ++p) {
        const auto& port = s.ports()[p];
        if (!port.incoming) continue;
        const Flow f = desired[s.id].desired[p];
        if (network_.send({s.id, port.neighbor, port.edge, Phase::alg2_desired, f, k_}, k_).delivered) {
          received_out[port.neighbor][slot_from_[port.edge]] = f;
        }
      }
    }
    network_.queue().take_due(k_);

    // Owners compute and announce the new flows.
    for (const auto& s : states_) {
      const auto next = outgoing_update_alg2(s, desired[s.id], received_out[s.id]);
      for (std::size_t p = 0; p < s.value.size(); ++p) {
        const auto& port = s.ports()[p];
        if (port.incoming) continue;
        if (network_.send({s.id, port.neighbor, port.edge, Phase::alg2_new, next[p], k_}, k_).delivered) {
          received_new_in[port.neighbor][slot_to_[port.edge]] = next[p];
        }
      }
    }
    network_.queue().take_due(k_);

    for (auto& s : states_) merge_flows_alg2(s, desired[s.id], received_out[s.id], received_new_in[s.id]);
  }

  Scenario sc_;
  Network network_;
  std::vector<NodeState> states_;
  std::vector<std::size_t> slot_from_;
  std::vector<std::size_t> slot_to_;
  Trace trace_;
  std::int64_t k_ = 0;
};

/// Runs a scenario to quiescence or its iteration budget.
inline Trace run(const Scenario& sc) { return Engine(sc).run(); }

}  // namespace flowbal
