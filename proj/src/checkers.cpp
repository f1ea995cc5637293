#include "hyperdyn/checkers.hpp"

#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/io.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <unordered_map>

namespace hyperdyn {

namespace {

Counterexample payload(const PLMap& f, const std::vector<const Continuum*>& continua, std::vector<std::size_t> periods,
                       std::vector<std::string> parameters = {}) {
  Counterexample c;
  c.graph_text = serialize_graph(f.graph());
  c.map_text = serialize_map(f);
  for (const Continuum* k : continua) c.continua.push_back(to_literal(f.graph(), *k));
  c.periods = std::move(periods);
  c.parameters = std::move(parameters);
  return c;
}

CheckOutcome outcome(std::string theorem, CheckStatus status, std::string message) {
  CheckOutcome o;
  o.theorem = std::move(theorem);
  o.status = status;
  o.message = std::move(message);
  return o;
}

std::vector<Continuum> orbit_prefix(const PLMap& f, const Continuum& k, std::size_t n) {
  std::vector<Continuum> out{k};
  for (std::size_t i = 0; i < n; ++i) out.push_back(induced_step(f, out.back()));
  return out;
}

/// Every aligned element with its image, and the period of those on cycles.
struct ElementGraph {
  std::vector<AlignedElement> elements;
  std::vector<std::size_t> image;
  std::vector<std::size_t> period;  // 0 when not periodic
};

ElementGraph element_graph(const PLMap& f, const MarkovData& m, std::size_t element_cap) {
  ElementGraph eg;
  const std::size_t points = m.points.size();
  for (std::size_t p = 0; p < points; ++p) eg.elements.push_back(AlignedElement{p, {}});
  std::unordered_map<CellSet, std::size_t, CellSetHash> index;
  for_each_connected_cell_set(m, element_cap, [&](const CellSet& s) {
    index.emplace(s, eg.elements.size());
    eg.elements.push_back(AlignedElement{std::nullopt, s});
  });
  eg.image.resize(eg.elements.size());
  for (std::size_t i = 0; i < eg.elements.size(); ++i) {
    AlignedElement img = aligned_image(m, eg.elements[i]);
    if (img.point) {
      eg.image[i] = *img.point;
    } else {
      auto it = index.find(img.cells);
      if (it == index.end()) throw ValidationError("image of an aligned continuum is not aligned");
      eg.image[i] = it->second;
    }
  }
  // Cycles of the functional graph.
  eg.period.assign(eg.elements.size(), 0);
  std::vector<int> state(eg.elements.size(), 0);  // 0 new, 1 on stack, 2 done
  for (std::size_t s = 0; s < eg.elements.size(); ++s) {
    if (state[s]) continue;
    std::vector<std::size_t> path;
    std::size_t x = s;
    while (state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = eg.image[x];
    }
    if (state[x] == 1) {
      auto pos = std::find(path.begin(), path.end(), x);
      std::size_t len = static_cast<std::size_t>(path.end() - pos);
      for (auto it = pos; it != path.end(); ++it) eg.period[*it] = len;
    }
    for (std::size_t y : path) state[y] = 2;
  }
  (void)f;
  return eg;
}

bool tree_or_unmet(const Graph& g, const std::string& theorem, CheckOutcome& out) {
  if (g.is_tree()) return true;
  out = outcome(theorem, CheckStatus::PreconditionUnmet, "graph is not a tree");
  return false;
}

std::vector<Rational> parse_params(const Counterexample& c) {
  std::vector<Rational> out;
  for (const auto& s : c.parameters) out.push_back(parse_rational(s));
  return out;
}

/// Recurrence evidence for one continuum by direct iteration.
CheckOutcome recurrence_of(const PLMap& f, const Continuum& a, std::size_t horizon, const Rational& tol) {
  const Graph& g = f.graph();
  const std::string theorem = "recurrence";
  auto per = detect_exact_period(f, a, horizon);
  if (per && per->preperiod == 0) return outcome(theorem, CheckStatus::Pass, "periodic");
  std::vector<Continuum> states = orbit_prefix(f, a, horizon);
  std::size_t from = per ? per->preperiod : horizon / 2;
  std::size_t to = per ? per->preperiod + per->period : horizon + 1;
  std::optional<Rational> best;
  for (std::size_t n = std::max<std::size_t>(from, 1); n < to && n < states.size(); ++n) {
    Rational d = hausdorff_distance(g, states[n], a);
    if (!best || d < *best) best = d;
  }
  if (best && *best < tol) {
    CheckOutcome o = outcome(theorem, CheckStatus::Fail, "returns within " + to_string(*best) + " of itself but is not periodic");
    o.counterexample = payload(f, {&a}, {}, {to_string(tol), std::to_string(horizon)});
    return o;
  }
  return outcome(theorem, CheckStatus::Pass, "not recurrent at this resolution");
}

/// max over n <= horizon of dist_H(C_n, B_n) with B's orbit supplied.
Rational deviation_against(const PLMap& f, const std::function<const Continuum&(std::size_t)>& b_at, const Continuum& c,
                           std::size_t horizon, const Rational& stop_at) {
  const Graph& g = f.graph();
  Rational worst = 0;
  Continuum cur = c;
  for (std::size_t n = 0; n <= horizon; ++n) {
    if (n > 0) cur = induced_step(f, cur);
    const Continuum& b = b_at(n);
    if (cur == b) break;  // identical from here on
    Rational d = hausdorff_distance(g, cur, b);
    if (d > worst) worst = d;
    if (worst >= stop_at) break;
  }
  return worst;
}

/// Orbit of one continuum, stored up to its first repeat.
struct CachedOrbit {
  std::vector<Continuum> states;
  std::size_t preperiod = 0;
  std::size_t period = 0;

  CachedOrbit(const PLMap& f, const Continuum& b, std::size_t horizon) {
    states.push_back(b);
    std::unordered_multimap<std::size_t, std::size_t> seen{{b.hash(), 0}};
    for (std::size_t n = 1; n <= horizon; ++n) {
      Continuum next = induced_step(f, states.back());
      auto [lo, hi] = seen.equal_range(next.hash());
      for (auto it = lo; it != hi; ++it)
        if (states[it->second] == next) {
          preperiod = it->second;
          period = n - it->second;
          return;
        }
      seen.emplace(next.hash(), n);
      states.push_back(std::move(next));
    }
  }

  const Continuum& at(std::size_t n) const {
    if (period == 0 || n < states.size()) return states[std::min(n, states.size() - 1)];
    return states[preperiod + (n - preperiod) % period];
  }
};

}  // namespace

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::PreconditionUnmet: return "precondition-unmet";
  }
  return "fail";
}

CheckOutcome verify_cycle_of_graphs(const PLMap& f, const Continuum& k, std::size_t period) {
  const std::string theorem = "cycle-of-graphs";
  if (period < 1) throw ValidationError("cycle period must be at least 1");
  const Graph& g = f.graph();
  auto orbit = orbit_prefix(f, k, period);
  auto fail = [&](const std::string& msg) {
    CheckOutcome o = outcome(theorem, CheckStatus::Fail, msg);
    o.counterexample = payload(f, {&k}, {period});
    return o;
  };
  for (std::size_t i = 0; i < period; ++i)
    for (std::size_t j = i + 1; j < period; ++j)
      if (intersects(g, orbit[i], orbit[j])) return fail("f^" + std::to_string(i) + "(K) meets f^" + std::to_string(j) + "(K)");
  if (!(orbit[period] == k)) return fail("f^" + std::to_string(period) + "(K) differs from K");
  return outcome(theorem, CheckStatus::Pass, "cycle of graphs of period " + std::to_string(period));
}

CheckOutcome check_period_bound(const PLMap& f, const Continuum& a, std::size_t horizon) {
  const std::string theorem = "period-bound";
  CheckOutcome o;
  const Graph& g = f.graph();
  if (!tree_or_unmet(g, theorem, o)) return o;
  auto per = detect_exact_period(f, a, horizon);
  if (!per || per->preperiod != 0) return outcome(theorem, CheckStatus::PreconditionUnmet, "continuum is not periodic within the horizon");
  if (!fixed_points(f).intersects(g, a.intervals())) return outcome(theorem, CheckStatus::PreconditionUnmet, "continuum contains no fixed point");
  const std::uint64_t m = lcm_end_bound(g);
  const std::size_t p = per->period;
  if (m % p == 0) return outcome(theorem, CheckStatus::Pass, "period " + std::to_string(p) + " divides " + std::to_string(m));
  o = outcome(theorem, CheckStatus::Fail, "period " + std::to_string(p) + " does not divide " + std::to_string(m));
  o.counterexample = payload(f, {&a}, {p}, {std::to_string(horizon)});
  return o;
}

CheckOutcome check_nesting(const PLMap& f, const Continuum& p1, const Continuum& p2, std::size_t horizon) {
  const std::string theorem = "nesting";
  CheckOutcome o;
  const Graph& g = f.graph();
  if (!tree_or_unmet(g, theorem, o)) return o;
  auto a = detect_exact_period(f, p1, horizon);
  auto b = detect_exact_period(f, p2, horizon);
  if (!a || a->preperiod != 0 || !b || b->preperiod != 0) return outcome(theorem, CheckStatus::PreconditionUnmet, "not both periodic");
  if (!intersects(g, p1, p2)) return outcome(theorem, CheckStatus::PreconditionUnmet, "P1 and P2 are disjoint");
  const std::uint64_t m = lcm_end_bound(g);
  if (!(static_cast<std::uint64_t>(a->period) > m * b->period))
    return outcome(theorem, CheckStatus::PreconditionUnmet, "p1 <= m p2");
  if (subset(g, p1, p2)) return outcome(theorem, CheckStatus::Pass, "P1 lies in P2");
  o = outcome(theorem, CheckStatus::Fail, "P1 is not contained in P2");
  o.counterexample = payload(f, {&p1, &p2}, {a->period, b->period}, {std::to_string(horizon)});
  return o;
}

std::vector<PeriodicSubtree> enumerate_periodic_subtrees(const PLMap& f, const MarkovData& m, std::size_t period_cap,
                                                         std::size_t element_cap) {
  const Graph& g = f.graph();
  if (!g.is_tree()) throw NotATree("periodic subtree enumeration needs a tree");
  ElementGraph eg = element_graph(f, m, element_cap);
  std::vector<PeriodicSubtree> out;
  for (std::size_t i = 0; i < eg.elements.size(); ++i)
    if (eg.period[i] != 0 && eg.period[i] <= period_cap)
      out.push_back(PeriodicSubtree{eg.elements[i], to_continuum(g, m, eg.elements[i]), eg.period[i]});
  return out;
}

CheckOutcome check_period_bound(const PLMap& f, const PeriodicSubtree& p, const FixedPointSet& fixed) {
  const std::string theorem = "period-bound";
  CheckOutcome o;
  const Graph& g = f.graph();
  if (!tree_or_unmet(g, theorem, o)) return o;
  if (!fixed.intersects(g, p.continuum.intervals())) return outcome(theorem, CheckStatus::PreconditionUnmet, "continuum contains no fixed point");
  const std::uint64_t m = lcm_end_bound(g);
  if (m % p.period == 0) return outcome(theorem, CheckStatus::Pass, "period " + std::to_string(p.period) + " divides " + std::to_string(m));
  o = outcome(theorem, CheckStatus::Fail, "period " + std::to_string(p.period) + " does not divide " + std::to_string(m));
  o.counterexample = payload(f, {&p.continuum}, {p.period}, {"5000"});
  return o;
}

CheckOutcome check_nesting(const PLMap& f, const PeriodicSubtree& p1, const PeriodicSubtree& p2) {
  const std::string theorem = "nesting";
  CheckOutcome o;
  const Graph& g = f.graph();
  if (!tree_or_unmet(g, theorem, o)) return o;
  const std::uint64_t m = lcm_end_bound(g);
  if (!(static_cast<std::uint64_t>(p1.period) > m * p2.period)) return outcome(theorem, CheckStatus::PreconditionUnmet, "p1 <= m p2");
  if (!intersects(g, p1.continuum, p2.continuum)) return outcome(theorem, CheckStatus::PreconditionUnmet, "P1 and P2 are disjoint");
  if (subset(g, p1.continuum, p2.continuum)) return outcome(theorem, CheckStatus::Pass, "P1 lies in P2");
  o = outcome(theorem, CheckStatus::Fail, "P1 is not contained in P2");
  o.counterexample = payload(f, {&p1.continuum, &p2.continuum}, {p1.period, p2.period}, {"5000"});
  return o;
}

std::vector<CheckOutcome> check_nesting_all(const PLMap& f, const std::vector<PeriodicSubtree>& all) {
  const Graph& g = f.graph();
  if (!g.is_tree()) return {outcome("nesting", CheckStatus::PreconditionUnmet, "graph is not a tree")};
  const std::uint64_t m = lcm_end_bound(g);
  std::vector<CheckOutcome> out;
  for (const auto& p1 : all)
    for (const auto& p2 : all) {
      if (!(static_cast<std::uint64_t>(p1.period) > m * p2.period)) continue;
      if (!intersects(g, p1.continuum, p2.continuum)) continue;
      out.push_back(check_nesting(f, p1, p2));
    }
  return out;
}

CheckOutcome check_recurrence_characterization(const PLMap& f, const MarkovData& m, std::size_t horizon, const Rational& tol,
                                               std::size_t element_cap) {
  const std::string theorem = "recurrence";
  CheckOutcome o;
  const Graph& g = f.graph();
  if (!tree_or_unmet(g, theorem, o)) return o;
  ElementGraph eg = element_graph(f, m, element_cap);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < eg.elements.size(); ++i) {
    if (eg.elements[i].degenerate() || eg.period[i] != 0) continue;
    ++checked;
    // Walk to the cycle; the lim inf of dist_H(f^n A, A) is its minimum over the cycle.
    std::size_t x = eg.image[i];
    std::size_t steps = 1;
    while (eg.period[x] == 0 && steps < horizon) {
      x = eg.image[x];
      ++steps;
    }
    if (eg.period[x] == 0) continue;  // cycle beyond the horizon: no evidence
    const Continuum a = to_continuum(g, m, eg.elements[i]);
    std::optional<Rational> best;
    std::size_t y = x;
    do {
      Rational d = hausdorff_distance(g, to_continuum(g, m, eg.elements[y]), a);
      if (!best || d < *best) best = d;
      y = eg.image[y];
    } while (y != x);
    if (*best < tol) {
      o = outcome(theorem, CheckStatus::Fail, "non-periodic continuum returns within " + to_string(*best) + " of itself");
      o.counterexample = payload(f, {&a}, {}, {to_string(tol), std::to_string(horizon)});
      return o;
    }
  }
  return outcome(theorem, CheckStatus::Pass, std::to_string(checked) + " non-periodic aligned continua checked");
}

CheckOutcome verify_generating_sequence(const PLMap& f, const std::vector<PeriodicSubtree>& chain) {
  const std::string theorem = "generating-sequence";
  const Graph& g = f.graph();
  std::vector<const Continuum*> all;
  std::vector<std::size_t> periods;
  for (const auto& k : chain) {
    all.push_back(&k.continuum);
    periods.push_back(k.period);
  }
  auto fail = [&](const std::string& msg) {
    CheckOutcome o = outcome(theorem, CheckStatus::Fail, msg);
    o.counterexample = payload(f, all, periods);
    return o;
  };
  std::vector<std::vector<Continuum>> orbits;
  for (const auto& k : chain) {
    CheckOutcome c = verify_cycle_of_graphs(f, k.continuum, k.period);
    if (c.status == CheckStatus::Fail) return fail("level of period " + std::to_string(k.period) + " is not a cycle of graphs: " + c.message);
    auto orbit = orbit_prefix(f, k.continuum, k.period - 1);
    orbits.push_back(std::move(orbit));
  }
  for (std::size_t n = 0; n + 1 < chain.size(); ++n) {
    const auto& outer = chain[n];
    const auto& inner = chain[n + 1];
    if (!subset(g, inner.continuum, outer.continuum) || inner.continuum == outer.continuum)
      return fail("level " + std::to_string(n + 2) + " is not strictly inside level " + std::to_string(n + 1));
    if (inner.period % outer.period != 0 || inner.period == outer.period)
      return fail("period " + std::to_string(inner.period) + " is not a proper multiple of " + std::to_string(outer.period));
    const std::size_t ratio = inner.period / outer.period;
    std::vector<std::size_t> owners(orbits[n + 1].size(), 0);
    for (const auto& comp : orbits[n]) {
      std::size_t inside = 0;
      for (std::size_t j = 0; j < orbits[n + 1].size(); ++j)
        if (subset(g, orbits[n + 1][j], comp)) {
          ++inside;
          ++owners[j];
        }
      if (inside != ratio)
        return fail("a component of level " + std::to_string(n + 1) + " holds " + std::to_string(inside) + " components of level " +
                    std::to_string(n + 2) + ", expected " + std::to_string(ratio));
    }
    if (std::any_of(owners.begin(), owners.end(), [](std::size_t c) { return c != 1; }))
      return fail("a component of level " + std::to_string(n + 2) + " is not inside exactly one component of level " + std::to_string(n + 1));
  }
  return outcome(theorem, CheckStatus::Pass, "generating-sequence invariants hold for " + std::to_string(chain.size()) + " levels");
}

CenterReport check_center_structure(const PLMap& f, const MarkovData& m, const CenterOptions& options) {
  const std::string theorem = "center";
  CenterReport report;
  const Graph& g = f.graph();
  if (!tree_or_unmet(g, theorem, report.outcome)) return report;

  ElementGraph eg = element_graph(f, m, options.element_cap);
  // Nondegenerate periodic elements that are cycles of graphs.
  std::vector<PeriodicSubtree> cycles;
  for (std::size_t i = 0; i < eg.elements.size(); ++i) {
    if (eg.elements[i].degenerate() || eg.period[i] == 0 || eg.period[i] > options.period_cap) continue;
    std::vector<std::size_t> orbit{i};
    for (std::size_t k = 1; k < eg.period[i]; ++k) orbit.push_back(eg.image[orbit.back()]);
    bool disjoint = true;
    std::vector<Continuum> conts;
    for (std::size_t j : orbit) conts.push_back(to_continuum(g, m, eg.elements[j]));
    for (std::size_t a = 0; a < conts.size() && disjoint; ++a)
      for (std::size_t b = a + 1; b < conts.size(); ++b)
        if (intersects(g, conts[a], conts[b])) {
          disjoint = false;
          break;
        }
    if (disjoint) cycles.push_back(PeriodicSubtree{eg.elements[i], conts.front(), eg.period[i]});
  }

  const std::size_t n = cycles.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<bool> has_pred(n, false);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto& outer = cycles[a];
      const auto& inner = cycles[b];
      if (inner.period <= outer.period || inner.period % outer.period != 0) continue;
      if (!inner.element.cells.subset_of(outer.element.cells)) continue;
      succ[a].push_back(b);
      has_pred[b] = true;
    }
  // Keep immediate refinements only.
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::size_t> direct;
    for (std::size_t b : succ[a]) {
      bool skips = std::any_of(succ[a].begin(), succ[a].end(), [&](std::size_t c) {
        return std::find(succ[c].begin(), succ[c].end(), b) != succ[c].end();
      });
      if (!skips) direct.push_back(b);
    }
    succ[a] = std::move(direct);
  }

  std::vector<std::size_t> path;
  std::function<void(std::size_t)> walk = [&](std::size_t a) {
    path.push_back(a);
    if (succ[a].empty() || path.size() >= options.depth) {
      if (path.size() >= 2) {
        if (report.chains.size() >= options.chain_cap) throw CombinatorialBlowup("too many generating chains");
        GeneratingChain c;
        for (std::size_t i : path) c.levels.push_back(cycles[i]);
        report.chains.push_back(std::move(c));
      }
    } else {
      for (std::size_t b : succ[a]) walk(b);
    }
    path.pop_back();
  };
  for (std::size_t a = 0; a < n; ++a)
    if (!has_pred[a]) walk(a);

  // Residual continua: maximal aligned pieces of the deepest level collapsed by its period.
  std::unordered_map<CellSet, std::vector<Continuum>, CellSetHash> residual_cache;
  auto residuals_of = [&](const PeriodicSubtree& deep) {
    auto it = residual_cache.find(deep.element.cells);
    if (it != residual_cache.end()) return it->second;
    std::vector<CellSet> collapsed;
    for (const auto& e : eg.elements) {
      if (e.degenerate() || !e.cells.subset_of(deep.element.cells)) continue;
      AlignedElement x = e;
      for (std::size_t k = 0; k < deep.period && !x.degenerate(); ++k) x = aligned_image(m, x);
      if (x.degenerate()) collapsed.push_back(e.cells);
    }
    std::vector<Continuum> out;
    for (const auto& s : collapsed) {
      bool maximal = std::none_of(collapsed.begin(), collapsed.end(), [&](const CellSet& t) { return !(t == s) && s.subset_of(t); });
      if (maximal) out.push_back(to_continuum(g, m, AlignedElement{std::nullopt, s}));
    }
    residual_cache.emplace(deep.element.cells, out);
    return out;
  };

  std::size_t checked = 0;
  for (auto& chain : report.chains) {
    CheckOutcome c = verify_generating_sequence(f, chain.levels);
    ++checked;
    if (c.status == CheckStatus::Fail) {
      c.theorem = theorem;
      report.outcome = c;
      return report;
    }
    chain.residuals = residuals_of(chain.levels.back());
    for (const auto& r : chain.residuals)
      if (std::find(report.distinct_residuals.begin(), report.distinct_residuals.end(), r) == report.distinct_residuals.end())
        report.distinct_residuals.push_back(r);
  }

  ClassifyOptions co;
  co.horizon = options.horizon;
  co.tol = options.tol;
  co.period_cap = options.period_cap;
  for (const auto& r : report.distinct_residuals) {
    report.residual_classes.push_back(classify(f, r, co));
    if (report.residual_classes.back().verdict != Verdict::AsymptoticallyDegenerate) {
      report.outcome = outcome(theorem, CheckStatus::Fail, "residual continuum classified " + verdict_name(report.residual_classes.back().verdict));
      report.outcome.counterexample = payload(f, {&r}, {}, {to_string(options.tol), std::to_string(options.horizon)});
      return report;
    }
  }
  const auto& rs = report.distinct_residuals;
  for (std::size_t a = 0; a < rs.size(); ++a)
    for (std::size_t b = a + 1; b < rs.size(); ++b)
      if (intersects(g, rs[a], rs[b])) {
        report.outcome = outcome(theorem, CheckStatus::Fail, "two residual continua overlap without being equal");
        report.outcome.counterexample = payload(f, {&rs[a], &rs[b]}, {});
        return report;
      }
  report.outcome = outcome(theorem, CheckStatus::Pass,
                           std::to_string(checked) + " chains, " + std::to_string(rs.size()) + " residual continua");
  return report;
}

std::vector<Continuum> probe_perturbations(const Graph& g, const Continuum& b, const Rational& delta, std::size_t count,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> unit(-1023, 1023);
  const Rational step = delta * Rational(1023, 1024) / 1024;  // |offset| < delta
  const IntervalSet& s = b.intervals();
  std::vector<Continuum> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    IntervalSet c(g.edge_count());
    for (EdgeId e = 0; e < s.edge_count(); ++e)
      for (const auto& iv : s.on_edge(e)) {
        Rational lo = iv.lo, hi = iv.hi;
        int ulo = unit(rng), uhi = unit(rng);
        if (lo > 0) lo = max(Rational(0), min(Rational(1), Rational(lo + ulo * step)));
        if (hi < 1) hi = max(Rational(0), min(Rational(1), Rational(hi + uhi * step)));
        if (lo > hi) lo = hi = (lo + hi) / 2;
        c.add(e, lo, hi);
      }
    // Let the set spill past vertices where it stops.
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (!s.contains_vertex(g, v)) continue;
      for (EdgeId e : g.incident_edges(v)) {
        int u = unit(rng);
        if (u <= 0) continue;
        const Edge& ed = g.edge(e);
        const auto& list = s.on_edge(e);
        bool at_u = ed.u == v && (list.empty() || list.front().lo != 0);
        bool at_v = ed.v == v && (list.empty() || list.back().hi != 1);
        if (at_u) c.add(e, 0, u * step);
        if (at_v) c.add(e, 1 - u * step, 1);
      }
    }
    out.push_back(Continuum::from_intervals(g, std::move(c)));
  }
  return out;
}

Rational orbit_deviation(const PLMap& f, const Continuum& b, const Continuum& c, std::size_t horizon, const Rational& stop_at) {
  CachedOrbit ob(f, b, horizon);
  return deviation_against(f, [&](std::size_t n) -> const Continuum& { return ob.at(n); }, c, horizon, stop_at);
}

EquicontinuityReport probe_equicontinuity(const PLMap& f, const Continuum& u, const std::vector<Rational>& eps_list,
                                          std::size_t horizon, const ProbeOptions& options) {
  const std::string theorem = "almost-equicontinuity";
  const Graph& g = f.graph();
  EquicontinuityReport rep;
  if (!tree_or_unmet(g, theorem, rep.outcome)) return rep;
  if (u.is_degenerate()) {
    rep.outcome = outcome(theorem, CheckStatus::PreconditionUnmet, "U must be nondegenerate");
    return rep;
  }
  for (VertexId v : g.classification().endpoints)
    if (u.intervals().contains_vertex(g, v)) {
      rep.outcome = outcome(theorem, CheckStatus::PreconditionUnmet, "U must avoid the endpoints of the tree");
      return rep;
    }

  for (const auto& gamma : options.gammas) {
    ProbeCandidate cand{gamma, neighborhood(g, u, gamma), {}};
    CachedOrbit ob(f, cand.b, horizon);
    auto b_at = [&](std::size_t n) -> const Continuum& { return ob.at(n); };
    for (const auto& eps : eps_list) {
      EpsCertificate cert{eps, std::nullopt, 0, 0};
      auto certify = [&](const Rational& delta, Rational& worst) {
        worst = 0;
        for (const auto& c : probe_perturbations(g, cand.b, delta, options.perturbations, options.seed)) {
          if (hausdorff_distance(g, c, cand.b) >= delta) continue;
          Rational d = deviation_against(f, b_at, c, horizon, eps);
          if (d > worst) worst = d;
          if (worst >= eps) return false;
        }
        return true;
      };
      Rational delta = eps;
      Rational worst;
      bool first = true;
      for (unsigned h = 0; h <= options.halvings; ++h, delta /= 2, first = false) {
        if (!certify(delta, worst)) continue;
        cert.delta = delta;
        cert.worst = worst;
        if (!first) {
          Rational lo = delta, hi = delta * 2;
          for (unsigned r = 0; r < options.refinements; ++r) {
            Rational mid = (lo + hi) / 2;
            Rational w;
            if (certify(mid, w)) {
              lo = mid;
              cert.delta = mid;
              cert.worst = w;
            } else {
              hi = mid;
            }
          }
        }
        cert.samples = options.perturbations;
        break;
      }
      cand.certificates.push_back(std::move(cert));
    }
    rep.candidates.push_back(std::move(cand));
  }

  rep.best.assign(eps_list.size(), std::nullopt);
  bool all = true;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    for (std::size_t c = 0; c < rep.candidates.size(); ++c) {
      const auto& d = rep.candidates[c].certificates[k].delta;
      if (d && (!rep.best[k] || *d > *rep.candidates[*rep.best[k]].certificates[k].delta)) rep.best[k] = c;
    }
    if (!rep.best[k]) all = false;
  }
  if (all) {
    rep.outcome = outcome(theorem, CheckStatus::Pass, "every eps has a certified candidate");
  } else {
    rep.outcome = outcome(theorem, CheckStatus::Fail, "some eps has no certified candidate");
    std::vector<std::string> params{std::to_string(horizon)};
    for (const auto& e : eps_list) params.push_back(to_string(e));
    rep.outcome.counterexample = payload(f, {&u}, {}, params);
  }
  rep.outcome.seed = options.seed;
  return rep;
}

CheckOutcome recheck(const CheckOutcome& failed) {
  if (!failed.counterexample) throw ValidationError("outcome carries no counterexample");
  const Counterexample& c = *failed.counterexample;
  auto g = std::make_shared<const Graph>(parse_graph(c.graph_text));
  PLMap f = parse_map(g, c.map_text).map;
  std::vector<Continuum> ks;
  for (const auto& lit : c.continua) ks.push_back(parse_continuum(*g, lit));
  auto need = [&](std::size_t conts, std::size_t periods) {
    if (ks.size() < conts || c.periods.size() < periods) throw ValidationError("counterexample payload is incomplete");
  };
  const std::string& t = failed.theorem;
  if (t == "cycle-of-graphs") {
    need(1, 1);
    return verify_cycle_of_graphs(f, ks[0], c.periods[0]);
  }
  if (t == "period-bound") {
    need(1, 0);
    return check_period_bound(f, ks[0], c.parameters.empty() ? 5000 : std::stoul(c.parameters[0]));
  }
  if (t == "nesting") {
    need(2, 0);
    return check_nesting(f, ks[0], ks[1], c.parameters.empty() ? 5000 : std::stoul(c.parameters[0]));
  }
  if (t == "recurrence") {
    need(1, 0);
    return recurrence_of(f, ks[0], std::stoul(c.parameters.at(1)), parse_rational(c.parameters.at(0)));
  }
  if (t == "generating-sequence") {
    std::vector<PeriodicSubtree> chain;
    for (std::size_t i = 0; i < ks.size() && i < c.periods.size(); ++i) chain.push_back(PeriodicSubtree{{}, ks[i], c.periods[i]});
    return verify_generating_sequence(f, chain);
  }
  if (t == "center") {
    if (ks.size() == 2) {
      if (intersects(*g, ks[0], ks[1]) && !(ks[0] == ks[1])) {
        CheckOutcome o = outcome(t, CheckStatus::Fail, "two residual continua overlap without being equal");
        o.counterexample = c;
        return o;
      }
      return outcome(t, CheckStatus::Pass, "residuals are disjoint or equal");
    }
    need(1, 0);
    ClassifyOptions co;
    auto params = parse_params(Counterexample{{}, {}, {}, {}, {c.parameters.at(0)}});
    co.tol = params[0];
    co.horizon = std::stoul(c.parameters.at(1));
    Classification cls = classify(f, ks[0], co);
    if (cls.verdict != Verdict::AsymptoticallyDegenerate) {
      CheckOutcome o = outcome(t, CheckStatus::Fail, "residual continuum classified " + verdict_name(cls.verdict));
      o.counterexample = c;
      return o;
    }
    return outcome(t, CheckStatus::Pass, "residual continuum is asymptotically degenerate");
  }
  if (t == "almost-equicontinuity") {
    need(1, 0);
    std::vector<Rational> eps;
    for (std::size_t i = 1; i < c.parameters.size(); ++i) eps.push_back(parse_rational(c.parameters[i]));
    ProbeOptions po;
    po.seed = failed.seed;
    return probe_equicontinuity(f, ks[0], eps, std::stoul(c.parameters.at(0)), po).outcome;
  }
  throw ValidationError("unknown theorem id '" + t + "'");
}

}  // namespace hyperdyn
