#pragma once

#include "hyperdyn/builtins.hpp"
#include "hyperdyn/continuum.hpp"
#include "hyperdyn/metric_graph.hpp"
#include "hyperdyn/rational.hpp"

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace testing {

using namespace hyperdyn;

inline std::shared_ptr<const Graph> make_graph(const std::vector<EdgeSpec>& edges) {
  return std::make_shared<const Graph>(Graph::build(edges));
}

inline std::shared_ptr<const Graph> arc() { return make_graph({{"e0", "v0", "v1"}}); }

inline std::shared_ptr<const Graph> star(unsigned arms) {
  std::vector<EdgeSpec> e;
  for (unsigned i = 0; i < arms; ++i) e.push_back({"a" + std::to_string(i), "c", "l" + std::to_string(i)});
  return make_graph(e);
}

inline std::shared_ptr<const Graph> loop() { return make_graph({{"e0", "v0", "v0"}}); }

/// A tree with a branching vertex of valence 3 and a path of length 2 hanging off it.
inline std::shared_ptr<const Graph> small_tree() {
  return make_graph({{"e0", "a", "b"}, {"e1", "b", "c"}, {"e2", "b", "d"}, {"e3", "d", "f"}});
}

/// Two vertices joined by three parallel edges plus a loop.
inline std::shared_ptr<const Graph> theta_with_loop() {
  return make_graph({{"e0", "u", "v"}, {"e1", "u", "v"}, {"e2", "v", "u"}, {"e3", "v", "v"}});
}

inline Rational grid(std::mt19937_64& rng, long den) {
  return rat(std::uniform_int_distribution<long>(0, den)(rng), den);
}

inline PointOnGraph random_point(const Graph& g, std::mt19937_64& rng, long den) {
  EdgeId e = std::uniform_int_distribution<std::size_t>(0, g.edge_count() - 1)(rng);
  return g.canonical({e, grid(rng, den)});
}

inline Continuum arc_set(const Graph& g, const Rational& lo, const Rational& hi) { return Continuum::interval(g, 0, lo, hi); }

}  // namespace testing
