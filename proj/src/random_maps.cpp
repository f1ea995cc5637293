#include "hyperdyn/random_maps.hpp"

#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"

#include <algorithm>
#include <queue>

namespace hyperdyn {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Edges from x to y in a tree, each oriented in the direction of travel.
std::vector<PathSegment> geodesic(const Graph& g, VertexId x, VertexId y) {
  std::vector<std::optional<EdgeId>> via(g.vertex_count());
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<VertexId> q;
  q.push(x);
  seen[x] = true;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (EdgeId e : g.incident_edges(v)) {
      const Edge& ed = g.edge(e);
      VertexId w = ed.u == v ? ed.v : ed.u;
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = e;
      q.push(w);
    }
  }
  std::vector<PathSegment> path;
  for (VertexId v = y; v != x;) {
    const Edge& ed = g.edge(*via[v]);
    VertexId prev = ed.u == v ? ed.v : ed.u;
    path.push_back(ed.u == prev ? PathSegment{*via[v], 0, 1} : PathSegment{*via[v], 1, 0});
    v = prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<PathSegment> route(const Graph& g, VertexId x, VertexId y) {
  auto path = geodesic(g, x, y);
  if (path.empty()) {
    PointOnGraph p = g.vertex_point(x);
    path.push_back(PathSegment{p.edge, p.t, p.t});
  }
  return path;
}

}  // namespace

std::shared_ptr<const Graph> random_tree(std::mt19937_64& rng, unsigned vertices) {
  if (vertices < 2) throw ValidationError("a tree needs at least two vertices");
  std::vector<EdgeSpec> specs;
  for (unsigned i = 1; i < vertices; ++i) {
    std::size_t parent = uniform(rng, 0, i - 1);
    specs.push_back({"e" + std::to_string(i - 1), "v" + std::to_string(parent), "v" + std::to_string(i)});
  }
  return std::make_shared<const Graph>(Graph::build(specs));
}

RandomMarkovMap random_markov_tree_map(std::uint64_t seed, const RandomMapOptions& options) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution split(options.split_probability);
  for (unsigned attempt = 0; attempt < options.max_attempts; ++attempt) {
    auto g = random_tree(rng, static_cast<unsigned>(uniform(rng, 2, options.max_vertices)));
    const std::size_t ends = g->endpoint_count();
    if (ends < options.min_endpoints || ends > options.max_endpoints) continue;
    std::vector<VertexId> image(g->vertex_count());
    for (auto& v : image) v = uniform(rng, 0, g->vertex_count() - 1);
    std::vector<PieceSpec> pieces;
    for (EdgeId e = 0; e < g->edge_count(); ++e) {
      const Edge& ed = g->edge(e);
      if (split(rng)) {
        VertexId mid = uniform(rng, 0, g->vertex_count() - 1);
        pieces.push_back(PieceSpec{e, 0, Rational(1, 2), route(*g, image[ed.u], mid)});
        pieces.push_back(PieceSpec{e, Rational(1, 2), 1, route(*g, mid, image[ed.v])});
      } else {
        pieces.push_back(PieceSpec{e, 0, 1, route(*g, image[ed.u], image[ed.v])});
      }
    }
    PLMap f = PLMap::build(g, std::move(pieces));
    try {
      MarkovData m = build_markov(f);
      if (m.cell_count() > options.max_cells) continue;
      return RandomMarkovMap{g, std::move(f), std::move(m), seed};
    } catch (const ValidationError&) {
      continue;
    }
  }
  throw ResourceCap("no admissible random map within " + std::to_string(options.max_attempts) + " attempts");
}

Continuum random_continuum(const Graph& g, std::mt19937_64& rng) {
  const Rational den(64);
  auto coordinate = [&]() -> Rational { return Rational(static_cast<long>(uniform(rng, 0, 64))) / den; };
  PointOnGraph x{uniform(rng, 0, g.edge_count() - 1), coordinate()};
  switch (uniform(rng, 0, 3)) {
    case 0: return Continuum::point(g, x);
    case 1: {
      Rational a = x.t, b = coordinate();
      if (b < a) std::swap(a, b);
      return Continuum::interval(g, x.edge, a, b);
    }
    default: {
      Rational r = Rational(static_cast<long>(uniform(rng, 1, 96))) / den;
      return neighborhood(g, Continuum::point(g, x), r);
    }
  }
}

}  // namespace hyperdyn
