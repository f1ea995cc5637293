#include "hyperdyn/metric_graph.hpp"

#include "hyperdyn/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace hyperdyn {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

Graph Graph::build(const std::vector<EdgeSpec>& specs) {
  if (specs.empty()) throw ValidationError("graph needs at least one edge");
  Graph g;
  auto vertex_of = [&g](const std::string& name) {
    auto [it, inserted] = g.vertex_index_.try_emplace(name, g.vertex_names_.size());
    if (inserted) g.vertex_names_.push_back(name);
    return it->second;
  };
  for (const auto& s : specs) {
    if (s.name.empty()) throw ValidationError("edge with empty id");
    if (!g.edge_index_.try_emplace(s.name, g.edges_.size()).second) throw DuplicateEdgeId("duplicate edge id '" + s.name + "'");
    Edge e{s.name, vertex_of(s.u), vertex_of(s.v)};
    g.edges_.push_back(std::move(e));
  }

  const std::size_t nv = g.vertex_names_.size();
  g.incident_.assign(nv, {});
  g.valence_.assign(nv, 0);
  for (EdgeId e = 0; e < g.edges_.size(); ++e) {
    const auto& ed = g.edges_[e];
    g.incident_[ed.u].push_back(e);
    g.valence_[ed.u] += 1;
    if (!ed.is_loop()) g.incident_[ed.v].push_back(e);
    g.valence_[ed.v] += 1;
  }

  g.hops_.assign(nv * nv, -1);
  for (VertexId s = 0; s < nv; ++s) {
    int* row = &g.hops_[s * nv];
    std::deque<VertexId> queue{s};
    row[s] = 0;
    while (!queue.empty()) {
      VertexId x = queue.front();
      queue.pop_front();
      for (EdgeId e : g.incident_[x]) {
        const auto& ed = g.edges_[e];
        VertexId y = ed.u == x ? ed.v : ed.u;
        if (row[y] < 0) {
          row[y] = row[x] + 1;
          queue.push_back(y);
        }
      }
    }
    if (std::any_of(row, row + nv, [](int d) { return d < 0; })) throw DisconnectedGraph("graph is not connected");
  }

  for (VertexId v = 0; v < nv; ++v) {
    if (g.valence_[v] == 1) g.classes_.endpoints.push_back(v);
    if (g.valence_[v] >= 3) g.classes_.branching.push_back(v);
  }
  return g;
}

std::optional<EdgeId> Graph::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> Graph::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> Graph::vertex_at(const PointOnGraph& p) const {
  if (p.t == 0) return edges_.at(p.edge).u;
  if (p.t == 1) return edges_.at(p.edge).v;
  return std::nullopt;
}

PointOnGraph Graph::vertex_point(VertexId v) const {
  EdgeId e = *std::min_element(incident_.at(v).begin(), incident_.at(v).end());
  return PointOnGraph{e, edges_[e].u == v ? Rational(0) : Rational(1)};
}

PointOnGraph Graph::canonical(const PointOnGraph& p) const {
  if (p.edge >= edges_.size()) throw ValidationError("point on unknown edge");
  if (p.t < 0 || p.t > 1) throw ValidationError("edge coordinate outside [0,1]");
  if (auto v = vertex_at(p)) return vertex_point(*v);
  return p;
}

bool Graph::disconnected_by(const PointOnGraph& raw) const {
  const PointOnGraph p = canonical(raw);
  if (auto w = vertex_at(p)) {
    // Components of G \ {w}: edges glued at vertices other than w.
    DisjointSets ds(edges_.size() + vertex_count());
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      if (edges_[e].u != *w) ds.unite(e, edges_.size() + edges_[e].u);
      if (edges_[e].v != *w) ds.unite(e, edges_.size() + edges_[e].v);
    }
    std::size_t root = ds.find(0);
    for (EdgeId e = 1; e < edges_.size(); ++e)
      if (ds.find(e) != root) return true;
    return false;
  }
  // Interior point of edge e: disconnects iff e is a bridge.
  const Edge& cut = edges_[p.edge];
  if (cut.is_loop()) return false;
  DisjointSets ds(vertex_count());
  for (EdgeId e = 0; e < edges_.size(); ++e)
    if (e != p.edge) ds.unite(edges_[e].u, edges_[e].v);
  return ds.find(cut.u) != ds.find(cut.v);
}

int valence(const Graph& g, const PointOnGraph& p) {
  if (auto v = g.vertex_at(g.canonical(p))) return g.vertex_valence(*v);
  return 2;
}

Rational distance(const Graph& g, const PointOnGraph& xr, const PointOnGraph& yr) {
  const PointOnGraph x = g.canonical(xr);
  const PointOnGraph y = g.canonical(yr);
  const Edge& ex = g.edge(x.edge);
  const Edge& ey = g.edge(y.edge);
  const VertexId xe[2] = {ex.u, ex.v};
  const Rational xc[2] = {x.t, 1 - x.t};
  const VertexId ye[2] = {ey.u, ey.v};
  const Rational yc[2] = {y.t, 1 - y.t};
  Rational best = xc[0] + yc[0] + g.vertex_distance(xe[0], ye[0]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Rational d = xc[i] + yc[j] + g.vertex_distance(xe[i], ye[j]);
      if (d < best) best = d;
    }
  if (x.edge == y.edge) {
    Rational direct = abs(x.t - y.t);
    if (direct < best) best = direct;
  }
  return best;
}

std::uint64_t lcm_upto(std::size_t n) {
  std::uint64_t acc = 1;
  for (std::uint64_t k = 2; k <= n; ++k) {
    std::uint64_t step = k / std::gcd(acc, k);
    if (acc > UINT64_MAX / step) throw ResourceCap("lcm{1..n} overflows 64 bits");
    acc *= step;
  }
  return acc;
}

std::uint64_t lcm_end_bound(const Graph& g) {
  if (!g.is_tree()) throw NotATree("lcm_end_bound requires a tree");
  return lcm_upto(g.endpoint_count());
}

}  // namespace hyperdyn
