#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flowbal/engine.hpp"

namespace flowbal {

/// Invariant checks applied to every record of a trace.
enum class Check : char {
  conservation = 'a',       // sum of all balances is 0
  cut_identity = 'b',       // subset balance == in-cut flow - out-cut flow
  twice_negative = 'c',     // epsilon == 2 * sum of |b| over negative nodes
  negative_set = 'd',       // V-[k+1] subset of V-[k]
  monotone = 'e',           // epsilon[k+1] <= epsilon[k]
  perceived_below = 'f',    // f_p <= f per edge, b_p <= b per node
  interval = 'g',           // every flow in [ceil(l), floor(u)]
  record = 'r',             // stored balances/epsilons match the flow snapshot
};

inline const char* describe(Check c) {
  switch (c) {
    case Check::conservation: return "balance conservation";
    case Check::cut_identity: return "subset cut identity";
    case Check::twice_negative: return "epsilon = 2 * negative mass";
    case Check::negative_set: return "negative set shrinks";
    case Check::monotone: return "epsilon non-increasing";
    case Check::perceived_below: return "perceived <= actual";
    case Check::interval: return "interval safety";
    case Check::record: return "record consistency";
  }
  return "?";
}

struct Violation {
  Check check;
  std::int64_t k;
  std::string witness;
};

struct AuditReport {
  std::vector<Violation> violations;  // first kMaxListed only
  std::uint64_t total = 0;
  std::map<Check, std::uint64_t> per_check;
  std::uint64_t records_checked = 0;
  std::uint64_t subsets_per_record = 0;

  static constexpr std::size_t kMaxListed = 200;

  bool clean() const noexcept { return total == 0; }

  void add(Check c, std::int64_t k, std::string w) {
    ++total;
    ++per_check[c];
    if (violations.size() < kMaxListed) violations.push_back({c, k, std::move(w)});
  }

  std::uint64_t count(Check c) const {
    auto it = per_check.find(c);
    return it == per_check.end() ? 0 : it->second;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "records checked: " << records_checked << "\n";
    os << "subsets per record: " << subsets_per_record << "\n";
    os << "violations: " << total << "\n";
    for (const auto& [c, n] : per_check) {
      os << "  (" << static_cast<char>(c) << ") " << flowbal::describe(c) << ": " << n << "\n";
    }
    for (const auto& v : violations) {
      os << "(" << static_cast<char>(v.check) << ") " << flowbal::describe(v.check) << " at k=" << v.k << ": "
         << v.witness << "\n";
    }
    if (total > violations.size()) os << "... " << total - violations.size() << " more\n";
    return os.str();
  }
};

namespace detail {

/// Exhaustive for n <= 10, otherwise 100 random proper subsets drawn from a
/// stream keyed by the trace seed.
inline std::vector<std::vector<bool>> audit_subsets(std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<bool>> out;
  if (n <= 10) {
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<bool> s(n);
      for (std::size_t v = 0; v < n; ++v) s[v] = (mask >> v) & 1u;
      out.push_back(std::move(s));
    }
    return out;
  }
  std::mt19937_64 rng(mix64(seed ^ 0x5ab5e7a5ab5e7ULL));
  while (out.size() < 100) {
    std::vector<bool> s(n);
    std::size_t members = 0;
    for (std::size_t v = 0; v < n; ++v) {
      s[v] = rng() >> 63;
      members += s[v];
    }
    if (members == 0 || members == n) continue;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

/// Checks every record of a finished trace against the balance identities,
/// the monotonicity properties, the perceived-versus-actual ordering and
/// interval safety. Pure; never throws on a well-formed trace.
inline AuditReport audit(const Trace& t) {
  AuditReport rep;
  const auto& g = t.graph;
  const std::size_t n = g.size();
  const auto subsets = detail::audit_subsets(n, t.seed);
  rep.subsets_per_record = subsets.size();

  for (std::size_t idx = 0; idx < t.records.size(); ++idx) {
    const auto& r = t.records[idx];
    ++rep.records_checked;

    // Stored per-node values must be consistent with the flow snapshot.
    const auto bal = node_balances(g, r.flow);
    std::vector<Flow> pbal(n, 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      pbal[g.edge(e).to] += r.perceived[e];
      pbal[g.edge(e).from] -= r.flow[e];
    }
    Flow eps = 0, peps = 0;
    for (NodeId v = 0; v < n; ++v) {
      eps += std::llabs(bal[v]);
      peps += std::llabs(pbal[v]);
    }
    if (bal != r.balance || pbal != r.perceived_balance || eps != r.epsilon || peps != r.epsilon_perceived) {
      rep.add(Check::record, r.k, "balances or epsilons disagree with the snapshot");
    }

    Flow total = 0, negative_mass = 0;
    for (NodeId v = 0; v < n; ++v) {
      total += r.balance[v];
      if (r.balance[v] < 0) negative_mass += -r.balance[v];
    }
    if (total != 0) rep.add(Check::conservation, r.k, "sum of balances = " + std::to_string(total));

    for (const auto& s : subsets) {
      Flow lhs = 0, rhs = 0;
      for (NodeId v = 0; v < n; ++v) {
        if (s[v]) lhs += r.balance[v];
      }
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(e);
        if (s[ed.to] && !s[ed.from]) rhs += r.flow[e];
        if (s[ed.from] && !s[ed.to]) rhs -= r.flow[e];
      }
      if (lhs != rhs) {
        std::string members;
        for (NodeId v = 0; v < n; ++v) {
          if (s[v]) members += (members.empty() ? "" : ",") + node_label(v);
        }
        rep.add(Check::cut_identity, r.k,
                "S={" + members + "}: " + std::to_string(lhs) + " != " + std::to_string(rhs));
      }
    }

    if (r.epsilon != 2 * negative_mass) {
      rep.add(Check::twice_negative, r.k,
              "epsilon=" + std::to_string(r.epsilon) + ", 2*negative=" + std::to_string(2 * negative_mass));
    }

    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (r.perceived[e] > r.flow[e]) {
        rep.add(Check::perceived_below, r.k,
                edge_label(g.edge(e)) + ": perceived " + std::to_string(r.perceived[e]) + " > actual " +
                    std::to_string(r.flow[e]));
      }
      const auto& iv = t.intervals[e];
      if (!iv.contains(r.flow[e]) || !iv.contains(r.perceived[e])) {
        rep.add(Check::interval, r.k,
                edge_label(g.edge(e)) + ": actual " + std::to_string(r.flow[e]) + ", perceived " +
                    std::to_string(r.perceived[e]) + " outside [" + std::to_string(iv.lo) + "," +
                    std::to_string(iv.hi) + "]");
      }
    }
    for (NodeId v = 0; v < n; ++v) {
      if (r.perceived_balance[v] > r.balance[v]) {
        rep.add(Check::perceived_below, r.k,
                node_label(v) + ": perceived balance " + std::to_string(r.perceived_balance[v]) + " > " +
                    std::to_string(r.balance[v]));
      }
    }

    if (idx + 1 < t.records.size()) {
      const auto& next = t.records[idx + 1];
      for (NodeId v = 0; v < n; ++v) {
        if (next.balance[v] < 0 && r.balance[v] >= 0) {
          rep.add(Check::negative_set, next.k,
                  node_label(v) + " became negative: " + std::to_string(r.balance[v]) + " -> " +
                      std::to_string(next.balance[v]));
        }
      }
      if (next.epsilon > r.epsilon) {
        rep.add(Check::monotone, next.k,
                "epsilon " + std::to_string(r.epsilon) + " -> " + std::to_string(next.epsilon));
      }
    }
  }
  return rep;
}

}  // namespace flowbal
