#include "support.hpp"

#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/io.hpp"
#include "hyperdyn/pl_map.hpp"
#include "hyperdyn/random_maps.hpp"

#include <doctest.h>

using namespace testing;

namespace {

Rational truncated_tent_formula(const Rational& s, const Rational& x) {
  Rational folded = x < rat(1, 2) ? Rational(x) : Rational(1 - x);
  Rational y = s * folded;
  return y > 1 ? Rational(1) : y;
}

Rational tent_formula(const Rational& x) { return x <= rat(1, 2) ? Rational(2 * x) : Rational(2 - 2 * x); }

Rational at(const PLMap& f, const Rational& x) {
  PointOnGraph p = f.evaluate({0, x});
  return p.t;
}

Continuum union_of(const Graph& g, const Continuum& a, const Continuum& b) {
  IntervalSet s = a.intervals();
  s.add_all(b.intervals());
  return Continuum::from_intervals(g, s);
}

PointOnGraph point_inside(const Graph& g, const Continuum& c, std::mt19937_64& rng) {
  std::vector<std::pair<EdgeId, Interval>> all;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (const auto& iv : c.intervals().on_edge(e)) all.push_back({e, iv});
  auto [e, iv] = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
  Rational w = grid(rng, 97);
  return g.canonical({e, iv.lo + w * (iv.hi - iv.lo)});
}

}  // namespace

TEST_CASE("evaluate: identity and truncated tent") {
  auto a = arc();
  PLMap id = PLMap::identity(a);
  for (int k = 0; k <= 12; ++k) CHECK(at(id, rat(k, 12)) == rat(k, 12));

  Builtin tt = truncated_tent(3);
  CHECK(at(tt.map, rat(1, 2)) == 1);
  CHECK(at(tt.map, 1) == 0);
  for (int k = 0; k <= 60; ++k) CHECK(at(tt.map, rat(k, 60)) == truncated_tent_formula(3, rat(k, 60)));
  for (int k = 0; k <= 60; ++k) CHECK(at(tent().map, rat(k, 60)) == tent_formula(rat(k, 60)));
}

TEST_CASE("image of the plateau is a point") {
  Builtin tt = truncated_tent(3);
  const Graph& g = tt.map.graph();
  Continuum img = image_continuum(tt.map, arc_set(g, rat(1, 3), rat(2, 3)));
  REQUIRE(img.as_point());
  CHECK(img.as_point()->t == 1);
  CHECK(image_continuum(PLMap::identity(tt.graph), arc_set(g, rat(1, 5), rat(2, 7))) == arc_set(g, rat(1, 5), rat(2, 7)));
  CHECK(image_continuum(tent().map, Continuum::whole(g)) == Continuum::whole(g));
}

TEST_CASE("star map shifts arms within each group") {
  Builtin st = star_3_4_2_5();
  const Graph& g = *st.graph;
  const unsigned sizes[4] = {3, 4, 2, 5};
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = 0; j < sizes[i]; ++j) {
      auto name = [&](unsigned k) { return "a" + std::to_string(i + 1) + "_" + std::to_string(k % sizes[i]); };
      EdgeId from = *g.find_edge(name(j)), to = *g.find_edge(name(j + 1));
      PointOnGraph img = st.map.evaluate({from, rat(2, 5)});
      CHECK(img == PointOnGraph{to, rat(2, 5)});
      Continuum seg = Continuum::interval(g, from, rat(1, 4), 1);
      CHECK(image_continuum(st.map, seg) == Continuum::interval(g, to, rat(1, 4), 1));
    }
}

TEST_CASE("compose_power") {
  Builtin tt = truncated_tent(3);
  CHECK(at(compose_power(tt.map, 1), rat(2, 7)) == at(tt.map, rat(2, 7)));
  CHECK(at(compose_power(tt.map, 2), rat(1, 9)) == 1);

  Builtin st = star_3_4_2_5();
  PLMap f12 = compose_power(st.map, 12);
  const Graph& g = *st.graph;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const std::string& n = g.edge(e).name;
    bool group12 = n.rfind("a1_", 0) == 0 || n.rfind("a2_", 0) == 0;
    for (int k = 0; k <= 8; ++k) {
      PointOnGraph p = g.canonical({e, rat(k, 8)});
      if (group12) CHECK(f12.evaluate(p) == p);
    }
    if (n.rfind("a4_", 0) == 0) CHECK(!(f12.evaluate({e, rat(1, 2)}) == PointOnGraph{e, rat(1, 2)}));
  }
}

TEST_CASE("fixed points") {
  auto a = arc();
  FixedPointSet idfp = fixed_points(PLMap::identity(a));
  CHECK(idfp.points.empty());
  CHECK(idfp.segments.on_edge(0) == std::vector<Interval>{{0, 1}});

  FixedPointSet tt = fixed_points(truncated_tent(3).map);
  CHECK(tt.segments.empty());
  REQUIRE(tt.points.size() == 2);
  CHECK(tt.points[0].t == 0);
  CHECK(tt.points[1].t == rat(3, 4));

  Builtin st = star_3_4_2_5();
  FixedPointSet sf = fixed_points(st.map);
  CHECK(sf.segments.empty());
  REQUIRE(sf.points.size() == 1);
  CHECK(st.graph->vertex_at(sf.points[0]) == st.graph->find_vertex("c"));
}

TEST_CASE("fixed points of interval maps match a per-piece solve") {
  std::mt19937_64 rng(17);
  auto g = arc();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<Rational, Rational>> nodes{{0, grid(rng, 6)}};
    int n = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 1; i < n; ++i) nodes.push_back({rat(i, n), grid(rng, 6)});
    nodes.push_back({1, grid(rng, 6)});
    PLMap f = interval_map(g, nodes);

    std::vector<Rational> expected;
    bool has_segment = false;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      auto [x0, y0] = nodes[i];
      auto [x1, y1] = nodes[i + 1];
      Rational slope = (y1 - y0) / (x1 - x0);
      if (slope == 1) {
        if (y0 == x0) has_segment = true;
        continue;
      }
      Rational x = (y0 - slope * x0) / (1 - slope);
      if (x >= x0 && x <= x1 && (expected.empty() || expected.back() != x)) expected.push_back(x);
    }
    FixedPointSet fp = fixed_points(f);
    for (const auto& p : fp.points) CHECK(f.evaluate(p) == p);
    if (!has_segment) {
      CHECK(fp.segments.empty());
      std::vector<Rational> got;
      for (const auto& p : fp.points) got.push_back(p.t);
      CHECK(got == expected);
    } else {
      for (const auto& iv : fp.segments.on_edge(0)) {
        CHECK(at(f, iv.lo) == iv.lo);
        CHECK(at(f, (iv.lo + iv.hi) / 2) == (iv.lo + iv.hi) / 2);
      }
    }
  }
}

TEST_CASE("image properties on random tree maps") {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomMarkovMap rm = random_markov_tree_map(seed);
    const Graph& g = *rm.graph;
    const PLMap& f = rm.map;
    for (const auto& p : fixed_points(f).points) CHECK(f.evaluate(p) == p);
    for (int i = 0; i < 10; ++i) {
      Continuum a = random_continuum(g, rng);
      Continuum b = random_continuum(g, rng);

      Continuum grown = neighborhood(g, a, grid(rng, 16));
      CHECK(subset(g, image_continuum(f, a), image_continuum(f, grown)));

      if (intersects(g, a, b)) {
        IntervalSet both = image_continuum(f, a).intervals();
        both.add_all(image_continuum(f, b).intervals());
        both.canonicalize(g);
        CHECK(image_continuum(f, union_of(g, a, b)).intervals() == both);
      }

      PointOnGraph x = point_inside(g, a, rng);
      CHECK(contains(g, image_continuum(f, a), f.evaluate(x)));

      Continuum iter = a;
      for (unsigned n = 1; n <= 5; ++n) {
        iter = image_continuum(f, iter);
        CHECK(image_continuum(compose_power(f, n), a) == iter);
      }
    }
  }
}

TEST_CASE("semi-conjugacy of the truncated tent and the tent") {
  const Rational s = 3;
  CollapseMap cm = truncated_tent_collapse(s, 8);
  REQUIRE(cm.remaining.size() == 256);
  PLMap f = truncated_tent(s).map;
  for (const auto& iv : cm.remaining)
    for (const Rational& x : {iv.lo, iv.hi}) {
      Rational phi_x = at(cm.phi, x);
      CHECK(at(cm.phi, truncated_tent_formula(s, x)) == tent_formula(phi_x));
    }
}

TEST_CASE("map validation") {
  auto g = arc();
  CHECK_THROWS_AS(PLMap::build(g, {PieceSpec{0, 0, rat(1, 2), {PathSegment{0, 0, rat(1, 2)}}}}), ValidationError);
  CHECK_THROWS_AS(PLMap::build(g, {PieceSpec{0, 0, rat(1, 2), {PathSegment{0, 0, rat(1, 2)}}},
                                   PieceSpec{0, rat(1, 2), 1, {PathSegment{0, rat(3, 4), 1}}}}),
                  ValidationError);
  auto s = star(3);
  std::vector<PieceSpec> swap_leaves;
  swap_leaves.push_back({0, 0, 1, {PathSegment{1, 0, 1}}});
  swap_leaves.push_back({1, 0, 1, {PathSegment{0, 0, 1}}});
  swap_leaves.push_back({2, 0, 1, {PathSegment{2, 1, 0}}});
  CHECK_THROWS_AS(PLMap::build(s, swap_leaves), ValidationError);
  swap_leaves[2] = {2, 0, 1, {PathSegment{2, 0, 1}}};
  CHECK_NOTHROW(PLMap::build(s, swap_leaves));
}

TEST_CASE("map text round trip") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomMarkovMap rm = random_markov_tree_map(seed);
    std::string text = serialize_map(rm.map, {{0, rat(1, 3)}});
    auto g2 = std::make_shared<const Graph>(parse_graph(serialize_graph(*rm.graph)));
    MapFile back = parse_map(g2, text);
    CHECK(serialize_map(back.map, back.seeds) == text);
    REQUIRE(back.seeds.size() == 1);
    CHECK(back.seeds[0].t == rat(1, 3));
  }
  auto g = arc();
  try {
    parse_map(g, "piece e0 0 1 -> e0[0..1]\npiece e0 0 1 -> e7[0..1]\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}
