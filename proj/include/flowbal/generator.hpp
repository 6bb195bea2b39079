#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "flowbal/network.hpp"
#include "flowbal/scenario.hpp"

namespace flowbal {

struct GeneratorParams {
  std::size_t nodes = 20;
  double density = 0.1;  // probability of each extra ordered pair
  Flow weight_max = 3;   // planted cycle weights drawn from [1, weight_max]
  Flow slack = 4;        // l = f* - U[0, slack] (at least 1), u = f* + U[0, slack]
  std::uint64_t seed = 1;
};

/// Random strongly connected digraph with bounds that admit a balanced
/// integer flow.
///
/// The nodes are first joined in a random directed Hamiltonian cycle; every
/// other ordered pair becomes an edge with probability `density`. A hidden
/// circulation f* is planted as a weighted sum of directed cycles (the
/// Hamiltonian cycle, plus for each extra edge a->b the cycle closing b back
/// to a along the Hamiltonian cycle), and each edge's bounds are placed
/// around f*. Edges are listed in (from, to) order. Only the graph and bounds
/// of the returned scenario are set.
inline Scenario generate_scenario(const GeneratorParams& p, FlowAssignment* planted = nullptr) {
  if (p.nodes < 2) throw std::invalid_argument("generator needs at least two nodes");
  if (!(p.density >= 0.0 && p.density <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
  if (p.weight_max < 1) throw std::invalid_argument("weight_max must be at least 1");
  if (p.slack < 0) throw std::invalid_argument("slack must be nonnegative");

  std::mt19937_64 rng(mix64(p.seed ^ 0x67656e6572617465ULL));
  auto uniform = [&](Flow lo, Flow hi) {
    return lo + static_cast<Flow>(detail::bounded_draw(rng, static_cast<std::uint64_t>(hi - lo)));
  };
  auto bernoulli = [&](double prob) {
    const double scaled = std::ldexp(prob, 64);
    return scaled >= 0x1p64 || rng() < static_cast<std::uint64_t>(scaled);
  };

  const std::size_t n = p.nodes;
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[static_cast<std::size_t>(uniform(0, static_cast<Flow>(i)))]);
  }
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[perm[i]] = i;

  std::map<Edge, Flow> flow;
  const Flow base = uniform(1, p.weight_max);
  for (std::size_t i = 0; i < n; ++i) flow[{perm[i], perm[(i + 1) % n]}] += base;

  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a == b || flow.count({a, b}) || !bernoulli(p.density)) continue;
      const Flow w = uniform(1, p.weight_max);
      flow[{a, b}] += w;
      for (std::size_t i = pos[b]; perm[i] != a; i = (i + 1) % n) flow[{perm[i], perm[(i + 1) % n]}] += w;
    }
  }

  Scenario sc;
  sc.graph = Digraph(n);
  std::vector<Rational> lower, upper;
  FlowAssignment star;
  for (const auto& [e, f] : flow) {
    sc.graph.add_edge(e.from, e.to);
    lower.emplace_back(std::max<Flow>(1, f - uniform(0, p.slack)));
    upper.emplace_back(f + uniform(0, p.slack));
    star.flow.push_back(f);
  }
  sc.bounds = FlowBounds(sc.graph, std::move(lower), std::move(upper));
  if (planted) *planted = std::move(star);
  return sc;
}

}  // namespace flowbal
