#include "grid_oracle.hpp"

#include "hyperdyn/checkers.hpp"
#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/random_maps.hpp"

#include <doctest.h>

using namespace testing;

namespace {

Rational abs_diff(const Rational& a, const Rational& b) { return a < b ? Rational(b - a) : Rational(a - b); }

std::vector<std::shared_ptr<const Graph>> families() { return {arc(), star(4), loop(), small_tree(), theta_with_loop()}; }

}  // namespace

TEST_CASE("hausdorff distance examples") {
  auto a = arc();
  CHECK(hausdorff_distance(*a, arc_set(*a, 0, rat(1, 2)), arc_set(*a, 0, rat(1, 2))) == 0);
  CHECK(hausdorff_distance(*a, arc_set(*a, 0, rat(1, 2)), arc_set(*a, rat(1, 2), 1)) == rat(1, 2));
  auto s = star(3);
  CHECK(hausdorff_distance(*s, Continuum::point(*s, {0, 0}), Continuum::whole(*s)) == 1);
  auto l = loop();
  CHECK(hausdorff_distance(*l, Continuum::point(*l, {0, 0}), Continuum::whole(*l)) == rat(1, 2));
}

TEST_CASE("neighborhood examples") {
  auto a = arc();
  CHECK(neighborhood(*a, Continuum::point(*a, {0, rat(1, 2)}), rat(1, 4)) == arc_set(*a, rat(1, 4), rat(3, 4)));
  CHECK(neighborhood(*a, arc_set(*a, rat(1, 3), rat(1, 2)), 5) == Continuum::whole(*a));
  auto s = star(3);
  Continuum n = neighborhood(*s, Continuum::point(*s, {0, 0}), rat(1, 3));
  for (EdgeId e = 0; e < 3; ++e) CHECK(n.intervals().on_edge(e) == std::vector<Interval>{{0, rat(1, 3)}});
  auto l = loop();
  Continuum around = neighborhood(*l, Continuum::point(*l, {0, rat(1, 8)}), rat(1, 4));
  CHECK(around.intervals().on_edge(0) == std::vector<Interval>{{0, rat(3, 8)}, {rat(7, 8), 1}});
}

TEST_CASE("diameter") {
  auto a = arc();
  CHECK(diameter(*a, arc_set(*a, rat(1, 4), rat(3, 4))) == rat(1, 2));
  CHECK(diameter(*star(3), Continuum::whole(*star(3))) == 2);
  CHECK(diameter(*loop(), Continuum::whole(*loop())) == rat(1, 2));
  CHECK(diameter(*a, Continuum::point(*a, {0, rat(1, 3)})) == 0);
}

TEST_CASE("hausdorff distance agrees with the grid oracle") {
  std::mt19937_64 rng(512);
  for (auto g : families()) {
    GridOracle oracle(*g);
    for (int i = 0; i < 200; ++i) {
      Continuum a = odd_continuum(*g, rng), b = odd_continuum(*g, rng);
      CAPTURE(to_literal(*g, a));
      CAPTURE(to_literal(*g, b));
      CHECK(abs_diff(hausdorff_distance(*g, a, b), oracle.hausdorff(a, b)) <= rat(2, K));
    }
  }
}

TEST_CASE("hausdorff distance is a metric") {
  std::mt19937_64 rng(77);
  for (auto g : families()) {
    for (int i = 0; i < 200; ++i) {
      Continuum a = odd_continuum(*g, rng), b = odd_continuum(*g, rng), c = odd_continuum(*g, rng);
      Rational ab = hausdorff_distance(*g, a, b);
      CHECK(ab == hausdorff_distance(*g, b, a));
      CHECK(hausdorff_distance(*g, a, a) == 0);
      CHECK((ab == 0) == (a == b));
      CHECK(hausdorff_distance(*g, a, c) <= ab + hausdorff_distance(*g, b, c));
    }
  }
}

TEST_CASE("neighborhoods grow with eps and bound the distance") {
  std::mt19937_64 rng(8);
  for (auto g : families()) {
    for (int i = 0; i < 100; ++i) {
      Continuum a = odd_continuum(*g, rng), b = odd_continuum(*g, rng);
      Rational e1 = grid(rng, 40), e2 = e1 + grid(rng, 40);
      Continuum n1 = neighborhood(*g, a, e1), n2 = neighborhood(*g, a, e2);
      CHECK(subset(*g, a, n1));
      CHECK(subset(*g, n1, n2));

      Rational d = hausdorff_distance(*g, a, b);
      for (const Rational& eps : std::vector<Rational>{d, d - rat(1, 1000), e1}) {
        if (eps < 0) continue;
        bool mutual = subset(*g, a, neighborhood(*g, b, eps)) && subset(*g, b, neighborhood(*g, a, eps));
        CHECK((d <= eps) == mutual);
      }
    }
  }
}

TEST_CASE("induced map continuity witness") {
  std::mt19937_64 rng(19);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomMarkovMap rm = random_markov_tree_map(seed);
    const Graph& g = *rm.graph;
    Rational lip = 1;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      for (const auto& p : rm.map.pieces(e)) lip = max(lip, p.length() / (p.hi - p.lo));
    for (int i = 0; i < 5; ++i) {
      Continuum a = random_continuum(g, rng);
      Rational eps = rat(1, 10);
      Rational delta = eps / lip;
      Continuum fa = image_continuum(rm.map, a);
      for (const Continuum& b : probe_perturbations(g, a, delta, 20, seed * 31 + i)) {
        REQUIRE(hausdorff_distance(g, a, b) < delta);
        CHECK(hausdorff_distance(g, fa, image_continuum(rm.map, b)) < eps);
      }
    }
  }
}

TEST_CASE("induced system observer sees every step") {
  Builtin tt = truncated_tent(3);
  std::vector<std::size_t> seen;
  InducedSystem sys(tt.map, [&](std::size_t n, const Continuum&) { seen.push_back(n); });
  Continuum a = arc_set(*tt.graph, rat(1, 3), rat(2, 3));
  a = sys.step(a);
  a = sys.step(a);
  CHECK(seen == std::vector<std::size_t>{1, 2});
  CHECK(a == Continuum::point(*tt.graph, {0, 0}));
}
