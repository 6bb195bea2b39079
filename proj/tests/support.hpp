#pragma once

#include <random>
#include <utility>
#include <vector>

#include "flowbal/flowbal.hpp"

namespace flowbal::testing {

// Edges are listed as (from, to) with 0-based ids: {0, 1} is flow v1 -> v2.
inline Scenario make_scenario(std::size_t n, const std::vector<std::pair<Edge, std::pair<Rational, Rational>>>& spec) {
  Scenario sc;
  sc.graph = Digraph(n);
  std::vector<Rational> lo, hi;
  for (const auto& [e, b] : spec) {
    sc.graph.add_edge(e.from, e.to);
    lo.push_back(b.first);
    hi.push_back(b.second);
  }
  sc.bounds = FlowBounds(sc.graph, lo, hi);
  return sc;
}

// v1 -> v2 with [a, b], v2 -> v1 with [c, d].
inline Scenario two_node(Rational a, Rational b, Rational c, Rational d) {
  return make_scenario(2, {{{0, 1}, {a, b}}, {{1, 0}, {c, d}}});
}

// v1 -> v2 -> v3 -> v1.
inline Scenario three_cycle(std::pair<Rational, Rational> b12, std::pair<Rational, Rational> b23,
                            std::pair<Rational, Rational> b31) {
  return make_scenario(3, {{{0, 1}, b12}, {{1, 2}, b23}, {{2, 0}, b31}});
}

// Random strongly connected digraph on n nodes (a random cycle plus extra
// edges) with integer bounds in [1, 10].
inline Scenario random_instance(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> bound(1, 10);
  std::vector<NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  const double density = coin(rng) * 0.6;
  Scenario sc;
  sc.graph = Digraph(n);
  for (std::size_t i = 0; i < n; ++i) sc.graph.add_edge(perm[i], perm[(i + 1) % n]);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a != b && !sc.graph.has_edge(a, b) && coin(rng) < density) sc.graph.add_edge(a, b);
    }
  }
  std::vector<Rational> lo, hi;
  for (EdgeId e = 0; e < sc.graph.edge_count(); ++e) {
    int x = bound(rng), y = bound(rng);
    if (x > y) std::swap(x, y);
    lo.emplace_back(x);
    hi.emplace_back(y);
  }
  sc.bounds = FlowBounds(sc.graph, lo, hi);
  return sc;
}

}  // namespace flowbal::testing
