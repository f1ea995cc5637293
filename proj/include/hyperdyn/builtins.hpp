#pragma once

#include "hyperdyn/continuum.hpp"
#include "hyperdyn/metric_graph.hpp"
#include "hyperdyn/pl_map.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperdyn {

/// A named example system: graph, map, and the continua it is usually studied with.
struct Builtin {
  std::string name;
  std::shared_ptr<const Graph> graph;
  PLMap map;
  std::map<std::string, Continuum> continua;
  /// Extra points the Markov partition should contain (ends of planted continua).
  std::vector<PointOnGraph> markov_seeds;
  bool approximate = false;
  std::string description;
};

/// `name` or `name(arg)`, e.g. `truncated-tent(3)`, `period-doubling(4)`.
/// Throws ValidationError for unknown names or bad arguments.
Builtin make_builtin(std::string_view spec);
std::vector<std::string> builtin_names();

std::shared_ptr<const Graph> arc_graph();
/// Star with arms `arm_names`, each an edge from the centre "c" (t=0) to its own leaf.
std::shared_ptr<const Graph> star_graph(const std::vector<std::string>& arm_names);

/// Continuous PL self-map of edge 0 of `g` through the nodes (x, y), x strictly
/// increasing from 0 to 1, y in [0,1].
PLMap interval_map(std::shared_ptr<const Graph> g, const std::vector<std::pair<Rational, Rational>>& nodes);

Builtin tent();
Builtin truncated_tent(const Rational& s);
Builtin star_3_4_2_5();
Builtin arm_rotation(unsigned k);
Builtin period_doubling(unsigned depth);
/// Two arms joined at a fixed centre, the period-doubling map on each.
Builtin period_doubling_pair(unsigned depth);
Builtin denjoy_approx(const Rational& rotation);
/// x/2 on [0,1/2], 3x/2 - 1/2 on [1/2,1]: attracting fixed point 0.
Builtin contracting();
/// x -> 1 - x.
Builtin flip();

/// The monotone collapse of the truncated tent's plateau and its preimages up to
/// `depth`, rescaled so that it intertwines the truncated tent with the tent map on
/// the ends of the surviving intervals.
struct CollapseMap {
  PLMap phi;
  std::vector<Interval> remaining;  // the 2^depth surviving intervals, left to right
};
CollapseMap truncated_tent_collapse(const Rational& s, unsigned depth);

}  // namespace hyperdyn
