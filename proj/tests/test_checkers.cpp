#include "support.hpp"

#include "hyperdyn/checkers.hpp"
#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/random_maps.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace testing;

namespace {

MarkovData markov_of(const Builtin& b) {
  MarkovOptions opt;
  opt.extra_seeds = b.markov_seeds;
  return build_markov(b.map, opt);
}

PeriodicSubtree subtree(const Builtin& b, const MarkovData& m, const std::string& name, std::size_t period) {
  const Continuum& c = b.continua.at(name);
  auto el = aligned_element(*b.graph, m, c);
  REQUIRE(el);
  return PeriodicSubtree{*el, c, period};
}

bool listed(const std::vector<PeriodicSubtree>& all, const Continuum& c, std::size_t period) {
  return std::any_of(all.begin(), all.end(), [&](const PeriodicSubtree& p) { return p.continuum == c && p.period == period; });
}

// Every point and every connected union of cells (found by trying to build the
// continuum), iterated directly until it returns or the cap runs out.
std::set<std::pair<std::string, std::size_t>> slow_periodic(const PLMap& f, const MarkovData& m, std::size_t cap) {
  const Graph& g = f.graph();
  std::vector<Continuum> candidates;
  for (const auto& p : m.points) candidates.push_back(Continuum::point(g, p));
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m.cell_count()); ++mask) {
    IntervalSet s(g.edge_count());
    for (std::size_t i = 0; i < m.cell_count(); ++i)
      if (mask >> i & 1) s.add(m.cells[i].edge, m.cells[i].lo, m.cells[i].hi);
    try {
      candidates.push_back(Continuum::from_intervals(g, s));
    } catch (const ValidationError&) {
    }
  }
  std::set<std::pair<std::string, std::size_t>> out;
  for (const Continuum& c : candidates) {
    Continuum x = c;
    for (std::size_t n = 1; n <= cap; ++n) {
      x = image_continuum(f, x);
      if (x == c) {
        out.insert({to_literal(g, c), n});
        break;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("verify_cycle_of_graphs") {
  Builtin t = tent();
  CHECK(verify_cycle_of_graphs(t.map, Continuum::whole(*t.graph), 1).status == CheckStatus::Pass);

  Builtin st = star_3_4_2_5();
  const Graph& g = *st.graph;
  // Whole arms share the centre, so their images are not pairwise disjoint.
  CheckOutcome arm = verify_cycle_of_graphs(st.map, st.continua.at("K"), 3);
  CHECK(arm.status == CheckStatus::Fail);

  Continuum sub = parse_continuum(g, "{ a1_0:[1/2,1] }");
  CHECK(verify_cycle_of_graphs(st.map, sub, 3).status == CheckStatus::Pass);
  CheckOutcome two = verify_cycle_of_graphs(st.map, sub, 2);
  CHECK(two.status == CheckStatus::Fail);
  REQUIRE(two.counterexample);
  CHECK(recheck(two).status == CheckStatus::Fail);
}

TEST_CASE("check_period_bound on the star") {
  Builtin st = star_3_4_2_5();
  CHECK(lcm_end_bound(*st.graph) == 360360);
  for (const char* name : {"A", "B"}) {
    CheckOutcome o = check_period_bound(st.map, st.continua.at(name));
    CHECK(o.status == CheckStatus::Pass);
  }
  CHECK(check_period_bound(st.map, Continuum::whole(*st.graph)).status == CheckStatus::Pass);
  CHECK(check_period_bound(st.map, st.continua.at("C")).status == CheckStatus::Pass);
  Continuum off = parse_continuum(*st.graph, "{ a1_0:[1/2,1] }");
  CHECK(check_period_bound(st.map, off).status == CheckStatus::PreconditionUnmet);
}

TEST_CASE("checks on a non-tree report unmet preconditions") {
  Builtin d = make_builtin("denjoy-approx(1/3)");
  CHECK(d.approximate);
  Continuum whole = Continuum::whole(*d.graph);
  CHECK(check_period_bound(d.map, whole).status == CheckStatus::PreconditionUnmet);
  CHECK(check_nesting(d.map, whole, whole).status == CheckStatus::PreconditionUnmet);
}

TEST_CASE("check_nesting") {
  Builtin pd = period_doubling(4);
  CHECK(check_nesting(pd.map, pd.continua.at("J2"), pd.continua.at("J2")).status == CheckStatus::PreconditionUnmet);
  CheckOutcome planted = check_nesting(pd.map, pd.continua.at("J8"), pd.continua.at("J2"));
  CHECK(planted.status == CheckStatus::Pass);
  CHECK(subset(*pd.graph, pd.continua.at("J8"), pd.continua.at("J2")));

  MarkovData m = markov_of(pd);
  auto j8 = subtree(pd, m, "J8", 8), j2 = subtree(pd, m, "J2", 2);
  CHECK(check_nesting(pd.map, j8, j2).status == CheckStatus::Pass);
  CHECK(check_nesting(pd.map, j2, j8).status == CheckStatus::PreconditionUnmet);

  auto all = enumerate_periodic_subtrees(pd.map, m);
  auto outcomes = check_nesting_all(pd.map, all);
  CHECK(!outcomes.empty());
  for (const auto& o : outcomes) CHECK(o.status == CheckStatus::Pass);
}

TEST_CASE("enumerate_periodic_subtrees examples") {
  auto a = arc();
  PLMap id = PLMap::identity(a);
  MarkovData mid = build_markov(id);
  auto all = enumerate_periodic_subtrees(id, mid);
  CHECK(all.size() == 3);
  for (const auto& p : all) CHECK(p.period == 1);

  Builtin t = tent();
  auto tent_all = enumerate_periodic_subtrees(t.map, build_markov(t.map));
  CHECK(listed(tent_all, Continuum::whole(*t.graph), 1));
  CHECK(listed(tent_all, Continuum::point(*t.graph, {0, rat(2, 3)}), 1));

  Builtin st = star_3_4_2_5();
  auto star_all = enumerate_periodic_subtrees(st.map, build_markov(st.map));
  CHECK(listed(star_all, st.continua.at("A"), 12));
  CHECK(listed(star_all, st.continua.at("B"), 30));
}

TEST_CASE("enumeration matches direct simulation on small partitions") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RandomMarkovMap rm = random_markov_tree_map(seed);
    std::size_t cap = static_cast<std::size_t>(lcm_end_bound(*rm.graph));
    std::set<std::pair<std::string, std::size_t>> fast;
    for (const auto& p : enumerate_periodic_subtrees(rm.map, rm.markov, cap)) fast.insert({to_literal(*rm.graph, p.continuum), p.period});
    CHECK(fast == slow_periodic(rm.map, rm.markov, cap));
    for (const auto& [lit, period] : fast) {
      auto info = detect_exact_period(rm.map, parse_continuum(*rm.graph, lit), cap + 1);
      REQUIRE(info);
      CHECK(info->preperiod == 0);
      CHECK(info->period == period);
    }
  }
}

TEST_CASE("period bound and nesting over random tree maps") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    RandomMarkovMap rm = random_markov_tree_map(seed);
    auto all = enumerate_periodic_subtrees(rm.map, rm.markov);
    FixedPointSet fixed = fixed_points(rm.map);
    std::uint64_t bound = lcm_end_bound(*rm.graph);
    for (const auto& p : all) {
      CheckOutcome o = check_period_bound(rm.map, p, fixed);
      CHECK(o.passed());
      if (o.status == CheckStatus::Pass) CHECK(bound % p.period == 0);
    }
    for (const auto& o : check_nesting_all(rm.map, all)) CHECK(o.passed());
  }
}

TEST_CASE("recurrence characterization") {
  Builtin pd = period_doubling(4);
  CHECK(check_recurrence_characterization(pd.map, markov_of(pd)).status == CheckStatus::Pass);
  Builtin st = star_3_4_2_5();
  CHECK(check_recurrence_characterization(st.map, build_markov(st.map)).passed());
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RandomMarkovMap rm = random_markov_tree_map(seed);
    CHECK(check_recurrence_characterization(rm.map, rm.markov).passed());
  }
}

TEST_CASE("generating sequences") {
  Builtin pd = period_doubling(4);
  MarkovData m = markov_of(pd);
  std::vector<PeriodicSubtree> chain{subtree(pd, m, "J1", 1), subtree(pd, m, "J2", 2), subtree(pd, m, "J4", 4), subtree(pd, m, "J8", 8)};
  CHECK(verify_generating_sequence(pd.map, chain).status == CheckStatus::Pass);

  std::vector<PeriodicSubtree> wrong_period = chain;
  wrong_period[2].period = 6;
  CheckOutcome bad = verify_generating_sequence(pd.map, wrong_period);
  CHECK(bad.status == CheckStatus::Fail);
  REQUIRE(bad.counterexample);
  CHECK(recheck(bad).status == CheckStatus::Fail);

  std::vector<PeriodicSubtree> reversed(chain.rbegin(), chain.rend());
  CHECK(verify_generating_sequence(pd.map, reversed).status == CheckStatus::Fail);
}

TEST_CASE("center structure") {
  Builtin pd = period_doubling(4);
  CenterReport r = check_center_structure(pd.map, markov_of(pd));
  CHECK(r.outcome.status == CheckStatus::Pass);
  bool found = false;
  for (const auto& c : r.chains) {
    if (c.levels.size() != 4) continue;
    found = found || (c.levels[0].continuum == pd.continua.at("J1") && c.levels[1].continuum == pd.continua.at("J2") &&
                      c.levels[2].continuum == pd.continua.at("J4") && c.levels[3].continuum == pd.continua.at("J8"));
  }
  CHECK(found);
  REQUIRE(r.residual_classes.size() == r.distinct_residuals.size());
  for (const auto& cls : r.residual_classes) CHECK(cls.verdict == Verdict::AsymptoticallyDegenerate);
  for (std::size_t i = 0; i < r.distinct_residuals.size(); ++i)
    for (std::size_t j = i + 1; j < r.distinct_residuals.size(); ++j)
      CHECK(!intersects(*pd.graph, r.distinct_residuals[i], r.distinct_residuals[j]));

  Builtin fl = flip();
  CenterReport none = check_center_structure(fl.map, build_markov(fl.map));
  CHECK(none.outcome.status == CheckStatus::Pass);
  CHECK(none.chains.empty());

  Builtin pair = period_doubling_pair(3);
  CenterReport two = check_center_structure(pair.map, markov_of(pair));
  CHECK(two.outcome.status == CheckStatus::Pass);
  std::set<EdgeId> sides;
  for (const auto& res : two.distinct_residuals)
    for (EdgeId e = 0; e < pair.graph->edge_count(); ++e)
      if (!res.intervals().on_edge(e).empty()) sides.insert(e);
  CHECK(sides.size() == 2);
}

TEST_CASE("equicontinuity probe") {
  auto a = arc();
  PLMap id = PLMap::identity(a);
  EquicontinuityReport r = probe_equicontinuity(id, arc_set(*a, rat(1, 4), rat(3, 4)), {rat(1, 10)}, 50);
  CHECK(r.outcome.status == CheckStatus::Pass);
  REQUIRE(r.best[0]);
  CHECK(r.candidates[*r.best[0]].certificates[0].delta == rat(1, 10));

  Builtin c = contracting();
  CHECK(probe_equicontinuity(c.map, c.continua.at("A"), {rat(1, 10), rat(1, 100)}, 60).outcome.status == CheckStatus::Pass);

  Builtin t = tent();
  CHECK(probe_equicontinuity(t.map, Continuum::whole(*t.graph), {rat(1, 10)}, 10).outcome.status == CheckStatus::PreconditionUnmet);
  CHECK(probe_equicontinuity(t.map, Continuum::point(*t.graph, {0, rat(1, 2)}), {rat(1, 10)}, 10).outcome.status ==
        CheckStatus::PreconditionUnmet);
}

TEST_CASE("probe certificates are monotone") {
  Builtin t = tent();
  ProbeOptions opt;
  opt.perturbations = 60;
  EquicontinuityReport r = probe_equicontinuity(t.map, arc_set(*t.graph, rat(1, 4), rat(3, 4)), {rat(1, 10)}, 100, opt);
  REQUIRE(r.outcome.status == CheckStatus::Pass);
  for (const auto& cand : r.candidates)
    for (const auto& cert : cand.certificates) {
      if (!cert.delta) continue;
      for (const Rational& smaller : std::vector<Rational>{*cert.delta, *cert.delta / 2, *cert.delta / 3})
        for (const Continuum& pert : probe_perturbations(*t.graph, cand.b, smaller, 30, 99)) {
          Rational dev = orbit_deviation(t.map, cand.b, pert, 100, cert.eps);
          CHECK(dev < cert.eps);
          CHECK(orbit_deviation(t.map, cand.b, pert, 100, cert.eps * 2) < cert.eps * 2);
        }
    }
}

TEST_CASE("counterexamples from random cycle claims replay") {
  std::mt19937_64 rng(4);
  std::size_t fails = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomMarkovMap rm = random_markov_tree_map(seed);
    for (int i = 0; i < 10; ++i) {
      Continuum k = random_continuum(*rm.graph, rng);
      std::size_t period = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
      CheckOutcome o = verify_cycle_of_graphs(rm.map, k, period);
      if (o.status != CheckStatus::Fail) continue;
      ++fails;
      REQUIRE(o.counterexample);
      CheckOutcome again = recheck(o);
      CHECK(again.status == CheckStatus::Fail);
      CHECK(again.message == o.message);
    }
  }
  CHECK(fails > 0);
  CheckOutcome pass = verify_cycle_of_graphs(tent().map, Continuum::whole(*tent().graph), 1);
  CHECK_THROWS_AS(recheck(pass), ValidationError);
}
