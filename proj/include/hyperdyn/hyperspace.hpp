#pragma once

#include "hyperdyn/continuum.hpp"
#include "hyperdyn/metric_graph.hpp"
#include "hyperdyn/pl_map.hpp"
#include "hyperdyn/rational.hpp"

#include <functional>

namespace hyperdyn {

/// min over y in B of d(v, y) for a vertex v; B must be nonempty.
Rational vertex_distance_to_set(const Graph& g, VertexId v, const IntervalSet& b);
/// dist(x, B) = min over y in B of d(x, y).
Rational distance_to_set(const Graph& g, const PointOnGraph& x, const IntervalSet& b);

/// sup over x in A of dist(x, B), exact.
Rational directed_hausdorff(const Graph& g, const IntervalSet& a, const IntervalSet& b);
Rational hausdorff_distance(const Graph& g, const Continuum& a, const Continuum& b);

/// Closed eps-neighbourhood {x : dist(x, A) <= eps}; eps >= 0.
IntervalSet neighborhood_set(const Graph& g, const IntervalSet& a, const Rational& eps);
Continuum neighborhood(const Graph& g, const Continuum& a, const Rational& eps);

/// max over x, y in A of d(x, y), exact.
Rational diameter(const Graph& g, const Continuum& a);

/// One step of the induced map on C(G).
inline Continuum induced_step(const PLMap& f, const Continuum& a) { return image_continuum(f, a); }

/// The pair (C(G), f~) as a dynamical system, with an optional observer that
/// sees every state produced by step().
class InducedSystem {
 public:
  using Observer = std::function<void(std::size_t step, const Continuum& state)>;

  explicit InducedSystem(const PLMap& f, Observer observer = {}) : f_(f), observer_(std::move(observer)) {}

  const PLMap& map() const noexcept { return f_; }
  const Graph& graph() const noexcept { return f_.graph(); }

  Continuum step(const Continuum& a) {
    Continuum next = induced_step(f_, a);
    ++steps_;
    if (observer_) observer_(steps_, next);
    return next;
  }
  std::size_t steps() const noexcept { return steps_; }

 private:
  const PLMap& f_;
  Observer observer_;
  std::size_t steps_ = 0;
};

}  // namespace hyperdyn
