#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "flowbal/audit.hpp"
#include "flowbal/engine.hpp"
#include "flowbal/generator.hpp"

namespace flowbal {

inline constexpr std::uint64_t kDefaultPresetGraphSeed = 2018;

/// Named experiment setups on a generated 20-node graph.
///   fig2      delay-tolerant algorithm, uniform delay bound 10
///   fig3      drop-resilient algorithm, drop probability 0.8 on every direction
///   sync      delay-tolerant algorithm, no delay
///   lossless  drop-resilient algorithm, no drops
inline Scenario make_preset(const std::string& name, std::uint64_t graph_seed = kDefaultPresetGraphSeed,
                            std::size_t nodes = 20) {
  GeneratorParams gp;
  gp.nodes = nodes;
  gp.seed = graph_seed;
  Scenario sc = generate_scenario(gp);
  if (name == "fig2") {
    sc.algorithm = Algorithm::delay_tolerant;
    sc.channel.kind = ChannelKind::delay;
    sc.channel.max_delay = 10;
  } else if (name == "fig3") {
    sc.algorithm = Algorithm::drop_resilient;
    sc.channel.kind = ChannelKind::drop;
    sc.channel.drop_probability = 0.8;
  } else if (name == "sync") {
    sc.algorithm = Algorithm::delay_tolerant;
    sc.channel.kind = ChannelKind::delay;
    sc.channel.max_delay = 0;
  } else if (name == "lossless") {
    sc.algorithm = Algorithm::drop_resilient;
    sc.channel.kind = ChannelKind::drop;
    sc.channel.drop_probability = 0.0;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (expected fig2, fig3, sync or lossless)");
  }
  return sc;
}

struct RunSummary {
  std::uint64_t seed = 0;
  bool converged = false;
  std::int64_t k0 = -1;
  std::int64_t iterations = 0;
  std::uint64_t violations = 0;
  bool epsilon_positive_throughout = false;
};

struct SweepResult {
  std::vector<RunSummary> runs;  // in seed-list order

  std::size_t converged() const {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.converged; }));
  }
  std::size_t audit_failures() const {
    return static_cast<std::size_t>(
        std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.violations != 0; }));
  }
  bool all_good() const { return converged() == runs.size() && audit_failures() == 0; }

  std::string report() const {
    std::ostringstream os;
    os << "runs: " << runs.size() << "\n";
    os << "converged: " << converged() << "/" << runs.size() << "\n";
    os << "audit failures: " << audit_failures() << "\n";
    std::vector<std::int64_t> k0;
    for (const auto& r : runs) {
      if (r.converged) k0.push_back(r.k0);
    }
    if (!k0.empty()) {
      std::sort(k0.begin(), k0.end());
      double mean = 0;
      for (auto v : k0) mean += static_cast<double>(v);
      mean /= static_cast<double>(k0.size());
      os << "k0 min/median/max/mean: " << k0.front() << " / " << k0[k0.size() / 2] << " / " << k0.back() << " / "
         << mean << "\n";
    }
    os << "seed,converged,k0,iterations,violations\n";
    for (const auto& r : runs) {
      os << r.seed << ',' << (r.converged ? 1 : 0) << ',' << r.k0 << ',' << r.iterations << ',' << r.violations
         << '\n';
    }
    return os.str();
  }
};

inline RunSummary summarize(const Trace& t, const AuditReport& rep) {
  RunSummary s;
  s.seed = t.seed;
  s.converged = t.outcome.converged;
  s.k0 = t.outcome.k0;
  s.iterations = t.records.back().k;
  s.violations = rep.total;
  s.epsilon_positive_throughout =
      std::all_of(t.records.begin(), t.records.end(), [](const auto& r) { return r.epsilon > 0; });
  return s;
}

/// Runs `base` once per seed on up to `threads` worker threads (0: hardware
/// concurrency). Each run is independent and single-threaded, so results do
/// not depend on the thread count. `on_trace`, if set, is called for every
/// finished run under a lock.
template <typename OnTrace = std::nullptr_t>
SweepResult sweep(const Scenario& base, const std::vector<std::uint64_t>& seeds, unsigned threads = 0,
                  OnTrace on_trace = nullptr) {
  SweepResult out;
  out.runs.resize(seeds.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(seeds.size(), 1)));

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        Scenario sc = base;
        sc.seed = seeds[i];
        const Trace t = run(sc);
        const AuditReport rep = audit(t);
        out.runs[i] = summarize(t, rep);
        if constexpr (!std::is_same_v<OnTrace, std::nullptr_t>) {
          std::lock_guard lock(mu);
          on_trace(t, rep);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace flowbal
