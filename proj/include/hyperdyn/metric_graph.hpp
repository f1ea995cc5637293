#pragma once

#include "hyperdyn/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyperdyn {

using EdgeId = std::size_t;
using VertexId = std::size_t;

struct EdgeSpec {
  std::string name;
  std::string u;
  std::string v;
};

/// An edge of unit length, parametrised by t in [0,1] from u (t=0) to v (t=1).
/// u == v marks a loop.
struct Edge {
  std::string name;
  VertexId u = 0;
  VertexId v = 0;

  bool is_loop() const noexcept { return u == v; }
};

/// A location on a graph: an edge and a coordinate along it.
/// Use Graph::canonical before comparing points that may sit on a vertex.
struct PointOnGraph {
  EdgeId edge = 0;
  Rational t;

  friend bool operator==(const PointOnGraph& a, const PointOnGraph& b) { return a.edge == b.edge && a.t == b.t; }
};

struct VertexClassification {
  std::vector<VertexId> endpoints;  // valence 1
  std::vector<VertexId> branching;  // valence >= 3
};

/// Connected combinatorial metric graph with unit edge lengths and the path metric.
/// Immutable after build(); safe to share between threads.
class Graph {
 public:
  static Graph build(const std::vector<EdgeSpec>& edges);

  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t vertex_count() const noexcept { return vertex_names_.size(); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }

  std::optional<EdgeId> find_edge(std::string_view name) const;
  std::optional<VertexId> find_vertex(std::string_view name) const;

  /// Distinct edges touching v (a loop is listed once).
  const std::vector<EdgeId>& incident_edges(VertexId v) const { return incident_.at(v); }
  /// Number of edge-ends at v; a loop contributes two.
  int vertex_valence(VertexId v) const { return valence_.at(v); }
  /// Hop distance between vertices, which equals the metric distance.
  int vertex_distance(VertexId a, VertexId b) const { return hops_[a * vertex_count() + b]; }

  bool is_tree() const noexcept { return edges_.size() + 1 == vertex_names_.size(); }
  const VertexClassification& classification() const noexcept { return classes_; }
  std::size_t endpoint_count() const noexcept { return classes_.endpoints.size(); }

  /// Vertex located at p, if p sits at t=0 or t=1.
  std::optional<VertexId> vertex_at(const PointOnGraph& p) const;
  /// The canonical point for vertex v: lowest incident edge, t in {0,1}.
  PointOnGraph vertex_point(VertexId v) const;
  /// Validates 0 <= t <= 1 and rewrites vertex locations to vertex_point().
  PointOnGraph canonical(const PointOnGraph& p) const;

  /// Whether removing p leaves the graph disconnected.
  bool disconnected_by(const PointOnGraph& p) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::string> vertex_names_;
  std::unordered_map<std::string, EdgeId> edge_index_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<int> valence_;
  std::vector<int> hops_;
  VertexClassification classes_;
};

/// Number of local branches at p: edge-ends for vertices, 2 for interior points.
int valence(const Graph& g, const PointOnGraph& p);

/// Exact shortest-path distance.
Rational distance(const Graph& g, const PointOnGraph& x, const PointOnGraph& y);

/// lcm{1, 2, ..., |End(g)|}; 1 when the tree has fewer than two endpoints.
/// Throws NotATree for graphs with cycles, ResourceCap on 64-bit overflow.
std::uint64_t lcm_end_bound(const Graph& g);

std::uint64_t lcm_upto(std::size_t n);

}  // namespace hyperdyn
