#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "flowbal/audit.hpp"
#include "flowbal/engine.hpp"

namespace flowbal {

/// "# scenario=<fnv64 hex> seed=<seed> algorithm=<alg1|alg2>"
inline std::string fingerprint_line(const Trace& t) {
  return "# scenario=" + hex64(t.fingerprint) + " seed=" + std::to_string(t.seed) +
         " algorithm=" + to_string(t.algorithm) + "\n";
}

/// Long format, one row per (k, entity, metric): node rows carry b and b_p,
/// edge rows carry f and f_p.
inline std::string trace_csv(const Trace& t) {
  std::ostringstream os;
  os << fingerprint_line(t) << "k,entity,metric,value\n";
  const auto& g = t.graph;
  for (const auto& r : t.records) {
    for (NodeId v = 0; v < g.size(); ++v) {
      os << r.k << ',' << node_label(v) << ",b," << r.balance[v] << '\n';
      os << r.k << ',' << node_label(v) << ",b_p," << r.perceived_balance[v] << '\n';
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      os << r.k << ',' << edge_label(g.edge(e)) << ",f," << r.flow[e] << '\n';
      os << r.k << ',' << edge_label(g.edge(e)) << ",f_p," << r.perceived[e] << '\n';
    }
  }
  return os.str();
}

inline std::string summary_csv(const Trace& t) {
  std::ostringstream os;
  os << fingerprint_line(t) << "k,epsilon,epsilon_perceived,inflight\n";
  for (const auto& r : t.records) {
    os << r.k << ',' << r.epsilon << ',' << r.epsilon_perceived << ',' << r.inflight << '\n';
  }
  return os.str();
}

/// Wide per-node balance table, one column per node.
inline std::string balances_csv(const Trace& t) {
  std::ostringstream os;
  os << fingerprint_line(t) << 'k';
  for (NodeId v = 0; v < t.graph.size(); ++v) os << ',' << node_label(v);
  os << '\n';
  for (const auto& r : t.records) {
    os << r.k;
    for (Flow b : r.balance) os << ',' << b;
    os << '\n';
  }
  return os.str();
}

inline std::string final_flows_csv(const Trace& t) {
  std::ostringstream os;
  os << fingerprint_line(t) << "edge,from,to,min,max,flow,perceived\n";
  const auto& r = t.final_record();
  for (EdgeId e = 0; e < t.graph.edge_count(); ++e) {
    const auto& ed = t.graph.edge(e);
    os << e << ',' << node_label(ed.from) << ',' << node_label(ed.to) << ',' << t.intervals[e].lo << ','
       << t.intervals[e].hi << ',' << r.flow[e] << ',' << r.perceived[e] << '\n';
  }
  return os.str();
}

inline std::string outcome_text(const Trace& t) {
  if (t.outcome.converged) return "converged k0=" + std::to_string(t.outcome.k0);
  return "max iterations exceeded after " + std::to_string(t.records.back().k) + " iterations";
}

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace detail

/// Writes trace.csv, summary.csv, balances.csv, flows.csv and audit.txt.
inline void write_run_outputs(const Trace& t, const AuditReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_file(dir / "trace.csv", trace_csv(t));
  detail::write_file(dir / "summary.csv", summary_csv(t));
  detail::write_file(dir / "balances.csv", balances_csv(t));
  detail::write_file(dir / "flows.csv", final_flows_csv(t));
  detail::write_file(dir / "audit.txt", fingerprint_line(t) + "outcome: " + outcome_text(t) + "\n" + rep.to_string());
}

}  // namespace flowbal
