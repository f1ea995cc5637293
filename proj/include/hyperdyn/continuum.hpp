#pragma once

#include "hyperdyn/metric_graph.hpp"
#include "hyperdyn/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hyperdyn {

/// Closed interval [lo, hi] of edge coordinates; lo == hi is a point.
struct Interval {
  Rational lo;
  Rational hi;

  bool degenerate() const { return lo == hi; }
  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

/// A finite union of closed intervals, stored per edge. Not necessarily connected.
///
/// After canonicalize(): intervals on each edge are sorted and pairwise disjoint,
/// a vertex appears as a degenerate interval only when no nondegenerate interval
/// reaches it, and then only on its canonical edge (see Graph::vertex_point).
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::size_t edge_count) : per_edge_(edge_count) {}

  std::size_t edge_count() const noexcept { return per_edge_.size(); }
  const std::vector<Interval>& on_edge(EdgeId e) const { return per_edge_.at(e); }

  void add(EdgeId e, Rational lo, Rational hi);
  void add_point(const PointOnGraph& p) { add(p.edge, p.t, p.t); }
  void add_all(const IntervalSet& other);
  void canonicalize(const Graph& g);

  bool empty() const;
  std::size_t interval_count() const;
  bool contains_vertex(const Graph& g, VertexId v) const;
  bool contains_point(const Graph& g, const PointOnGraph& p) const;
  /// Number of connected components of the union.
  std::size_t component_count(const Graph& g) const;

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) { return a.per_edge_ == b.per_edge_; }

 private:
  std::vector<std::vector<Interval>> per_edge_;
};

/// Nonempty closed connected subset of a graph: an element of the hyperspace C(G).
/// Always canonical, so structural equality is set equality.
class Continuum {
 public:
  /// Canonicalizes and validates; throws ValidationError when empty or disconnected.
  static Continuum from_intervals(const Graph& g, IntervalSet set);
  static Continuum point(const Graph& g, const PointOnGraph& p);
  static Continuum interval(const Graph& g, EdgeId e, Rational lo, Rational hi);
  static Continuum whole(const Graph& g);

  const IntervalSet& intervals() const noexcept { return set_; }
  std::size_t interval_count() const { return set_.interval_count(); }
  bool is_degenerate() const;
  std::optional<PointOnGraph> as_point() const;
  std::size_t hash() const noexcept { return hash_; }

  friend bool operator==(const Continuum& a, const Continuum& b) {
    return a.hash_ == b.hash_ && a.set_ == b.set_;
  }

 private:
  Continuum(IntervalSet s, std::size_t h) : set_(std::move(s)), hash_(h) {}

  IntervalSet set_;
  std::size_t hash_ = 0;
};

bool subset(const Graph& g, const IntervalSet& a, const IntervalSet& b);
bool intersects(const Graph& g, const IntervalSet& a, const IntervalSet& b);

inline bool subset(const Graph& g, const Continuum& a, const Continuum& b) {
  return subset(g, a.intervals(), b.intervals());
}
inline bool intersects(const Graph& g, const Continuum& a, const Continuum& b) {
  return intersects(g, a.intervals(), b.intervals());
}
inline bool contains(const Graph& g, const Continuum& a, const PointOnGraph& p) {
  return a.intervals().contains_point(g, p);
}

/// Literal form `{ e0:[1/4,1], e3:[0,1/3] }` in canonical order.
std::string to_literal(const Graph& g, const IntervalSet& s);
inline std::string to_literal(const Graph& g, const Continuum& c) { return to_literal(g, c.intervals()); }
IntervalSet parse_interval_set(const Graph& g, std::string_view text);
Continuum parse_continuum(const Graph& g, std::string_view text);

}  // namespace hyperdyn
