#pragma once

#include "hyperdyn/continuum.hpp"
#include "hyperdyn/metric_graph.hpp"
#include "hyperdyn/rational.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace hyperdyn {

/// One straight run along an edge, traversed from `from` to `to`.
struct PathSegment {
  EdgeId edge = 0;
  Rational from;
  Rational to;

  Rational length() const { return abs(to - from); }
  friend bool operator==(const PathSegment& a, const PathSegment& b) {
    return a.edge == b.edge && a.from == b.from && a.to == b.to;
  }
};

/// A linear piece of a map: the domain [lo, hi] of one edge is sent at constant
/// speed along `path`. A zero-length path (single degenerate segment) is a plateau.
struct Piece {
  Rational lo;
  Rational hi;
  std::vector<PathSegment> path;
  std::vector<Rational> cumulative;  // arc length at the start of each segment, plus the total

  const Rational& length() const { return cumulative.back(); }
  bool plateau() const { return length() == 0; }
};

struct PieceSpec {
  EdgeId edge = 0;
  Rational lo;
  Rational hi;
  std::vector<PathSegment> path;
};

/// Continuous piecewise-linear self-map of a metric graph. Immutable; evaluation is pure.
class PLMap {
 public:
  /// Validates coverage of every edge, well-formed paths, continuity at interior
  /// breakpoints and at vertices. Throws ValidationError.
  static PLMap build(std::shared_ptr<const Graph> graph, std::vector<PieceSpec> pieces);
  static PLMap identity(std::shared_ptr<const Graph> graph);

  const Graph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const noexcept { return graph_; }
  const std::vector<Piece>& pieces(EdgeId e) const { return pieces_.at(e); }
  std::size_t piece_count() const noexcept;
  std::vector<PieceSpec> piece_specs() const;

  PointOnGraph evaluate(const PointOnGraph& x) const;

  /// Internal: skips continuity validation. Used for composites of validated maps.
  static PLMap assemble(std::shared_ptr<const Graph> graph, std::vector<PieceSpec> pieces, bool validate);

 private:
  std::shared_ptr<const Graph> graph_;
  std::vector<std::vector<Piece>> pieces_;
};

inline PointOnGraph evaluate(const PLMap& f, const PointOnGraph& x) { return f.evaluate(x); }

/// Forward image of a finite union of closed intervals (canonicalized).
IntervalSet image_set(const PLMap& f, const IntervalSet& a);
/// f(A); connected because A is.
Continuum image_continuum(const PLMap& f, const Continuum& a);

/// outer ∘ inner.
PLMap compose(const PLMap& outer, const PLMap& inner, std::size_t piece_cap = 100000);
/// f^n materialized; throws PieceExplosion past `piece_cap` pieces.
PLMap compose_power(const PLMap& f, unsigned n, std::size_t piece_cap = 100000);

struct FixedPointSet {
  std::vector<PointOnGraph> points;  // isolated fixed points, canonical, outside `segments`
  IntervalSet segments;              // maximal segments on which f is the identity

  bool intersects(const Graph& g, const IntervalSet& a) const;
};

/// All solutions of f(x) = x.
FixedPointSet fixed_points(const PLMap& f);

/// Piece boundaries plus domain preimages of image-path junctions: the points
/// where f may fail to be locally injective along an edge.
std::vector<PointOnGraph> critical_points(const PLMap& f);

}  // namespace hyperdyn
