#pragma once

#include "hyperdyn/continuum.hpp"
#include "hyperdyn/markov.hpp"
#include "hyperdyn/metric_graph.hpp"
#include "hyperdyn/pl_map.hpp"

#include <cstdint>
#include <memory>
#include <random>

namespace hyperdyn {

struct RandomMapOptions {
  unsigned min_endpoints = 2;
  unsigned max_endpoints = 6;
  unsigned max_vertices = 9;
  std::size_t max_cells = 12;
  /// Chance that an edge is routed through an extra vertex, breaking at t = 1/2.
  double split_probability = 0.3;
  unsigned max_attempts = 10000;
};

/// A random tree map sending vertices to vertices and edges along geodesics,
/// together with its Markov partition.
struct RandomMarkovMap {
  std::shared_ptr<const Graph> graph;
  PLMap map;
  MarkovData markov;
  std::uint64_t seed = 0;
};

/// Deterministic in `seed`. Throws ResourceCap when no admissible map turns up
/// within max_attempts draws.
RandomMarkovMap random_markov_tree_map(std::uint64_t seed, const RandomMapOptions& options = {});

/// Random tree on `vertices` vertices (vertex i > 0 hangs off an earlier one).
std::shared_ptr<const Graph> random_tree(std::mt19937_64& rng, unsigned vertices);

/// A point, an arc inside one edge, or a closed neighbourhood of a point, with
/// coordinates of denominator at most 64.
Continuum random_continuum(const Graph& g, std::mt19937_64& rng);

}  // namespace hyperdyn
