#include "hyperdyn/dynamics.hpp"

#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"

#include <algorithm>
#include <unordered_map>

namespace hyperdyn {

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Orbit computed until the first exact repeat or the horizon.
struct Trajectory {
  std::vector<Continuum> states;
  std::optional<PeriodInfo> period;
};

Trajectory trace(const PLMap& f, const Continuum& a, std::size_t horizon) {
  Trajectory tr;
  std::unordered_multimap<std::size_t, std::size_t> seen;
  tr.states.push_back(a);
  seen.emplace(a.hash(), 0);
  for (std::size_t n = 1; n <= horizon; ++n) {
    Continuum next = induced_step(f, tr.states.back());
    auto [lo, hi] = seen.equal_range(next.hash());
    for (auto it = lo; it != hi; ++it)
      if (tr.states[it->second] == next) {
        tr.period = PeriodInfo{it->second, n - it->second};
        tr.states.push_back(std::move(next));
        return tr;
      }
    seen.emplace(next.hash(), n);
    tr.states.push_back(std::move(next));
  }
  return tr;
}

std::optional<AsymptoticInfo> asymptotic_from(const Graph& g, const std::vector<Continuum>& states, const Rational& tol,
                                              std::size_t period_cap) {
  const std::size_t horizon = states.size() - 1;
  const std::size_t start = horizon - horizon / 4;
  for (std::size_t p = 1; p <= period_cap && start + p <= horizon; ++p) {
    Rational worst = 0;
    bool ok = true;
    for (std::size_t n = start; n + p <= horizon; ++n) {
      Rational d = hausdorff_distance(g, states[n + p], states[n]);
      if (d >= tol) {
        ok = false;
        break;
      }
      if (d > worst) worst = d;
    }
    if (!ok) continue;
    AsymptoticInfo info;
    info.period = p;
    info.cycle_start = horizon - p + 1;
    info.limit_cycle.assign(states.begin() + static_cast<std::ptrdiff_t>(info.cycle_start), states.end());
    info.residual = worst;
    return info;
  }
  return std::nullopt;
}

}  // namespace

OrbitReport iterate_orbit(const PLMap& f, const Continuum& a, std::size_t horizon, const OrbitOptions& options) {
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  const Graph& g = f.graph();
  OrbitReport r;
  r.horizon = horizon;
  r.pairs_recorded = horizon <= options.pairs_max_horizon;
  std::vector<Continuum> all;
  Continuum cur = a;
  for (std::size_t n = 0; n <= horizon; ++n) {
    if (n > 0) cur = induced_step(f, cur);
    if (cur.interval_count() > options.interval_cap) throw ResourceCap("iterate " + std::to_string(n) + " exceeds the interval cap");
    r.diameters.push_back(diameter(g, cur));
    if (horizon < options.keep_all_below || n < options.keep_all_below || power_of_two(n) || n == horizon)
      r.snapshots.emplace_back(n, cur);
    if (r.pairs_recorded) {
      for (std::size_t j = 0; j < all.size(); ++j)
        if (intersects(g, all[j], cur)) r.intersecting_pairs.emplace_back(j, n);
      all.push_back(cur);
    }
  }
  return r;
}

std::optional<PeriodInfo> detect_exact_period(const PLMap& f, const Continuum& a, std::size_t horizon) {
  return trace(f, a, horizon).period;
}

std::optional<AsymptoticInfo> detect_asymptotic_periodicity(const PLMap& f, const Continuum& a, std::size_t horizon,
                                                            const Rational& tol, std::size_t period_cap) {
  if (tol <= 0) throw ValidationError("tolerance must be positive");
  Trajectory tr = trace(f, a, horizon);
  if (tr.period) {
    AsymptoticInfo info;
    info.period = tr.period->period;
    info.cycle_start = tr.period->preperiod;
    info.limit_cycle.assign(tr.states.begin() + static_cast<std::ptrdiff_t>(info.cycle_start),
                            tr.states.begin() + static_cast<std::ptrdiff_t>(info.cycle_start + info.period));
    info.residual = 0;
    return info;
  }
  return asymptotic_from(f.graph(), tr.states, tol, period_cap);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ExactlyPeriodic: return "ExactlyPeriodic";
    case Verdict::AsymptoticallyPeriodic: return "AsymptoticallyPeriodic";
    case Verdict::AsymptoticallyDegenerate: return "AsymptoticallyDegenerate";
    case Verdict::WanderingWitnessed: return "WanderingWitnessed";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Classification classify(const PLMap& f, const Continuum& a, const ClassifyOptions& options) {
  if (options.horizon < 1) throw ValidationError("horizon must be at least 1");
  if (options.tol <= 0) throw ValidationError("tolerance must be positive");
  const Graph& g = f.graph();
  Trajectory tr = trace(f, a, options.horizon);
  Classification c;
  c.horizon = options.horizon;
  c.steps = tr.states.size() - 1;
  c.final_diameter = diameter(g, tr.states.back());

  auto degenerate_cycle = [&] {
    return std::all_of(c.limit_cycle.begin(), c.limit_cycle.end(), [](const Continuum& k) { return k.is_degenerate(); });
  };

  if (tr.period) {
    c.period = tr.period->period;
    c.preperiod = tr.period->preperiod;
    c.cycle_start = c.preperiod;
    c.limit_cycle.assign(tr.states.begin() + static_cast<std::ptrdiff_t>(c.preperiod),
                         tr.states.begin() + static_cast<std::ptrdiff_t>(c.preperiod + c.period));
    c.residual = 0;
    if (!a.is_degenerate() && c.preperiod > 0 && degenerate_cycle()) {
      c.verdict = Verdict::AsymptoticallyDegenerate;
      c.note = "collapses exactly onto a periodic orbit of points";
    } else {
      c.verdict = Verdict::ExactlyPeriodic;
    }
    return c;
  }

  if (auto asym = asymptotic_from(g, tr.states, options.tol, options.period_cap)) {
    c.period = asym->period;
    c.limit_cycle = std::move(asym->limit_cycle);
    c.cycle_start = asym->cycle_start;
    c.residual = asym->residual;
    bool small = std::all_of(c.limit_cycle.begin(), c.limit_cycle.end(),
                             [&](const Continuum& k) { return diameter(g, k) < options.tol; });
    c.verdict = small ? Verdict::AsymptoticallyDegenerate : Verdict::AsymptoticallyPeriodic;
    return c;
  }

  bool disjoint = true;
  for (std::size_t k = 1; k < tr.states.size() && disjoint; ++k)
    for (std::size_t j = 0; j < k; ++j)
      if (intersects(g, tr.states[j], tr.states[k])) {
        disjoint = false;
        break;
      }
  if (disjoint) {
    c.verdict = Verdict::WanderingWitnessed;
    c.note = "no two iterates intersect up to the horizon";
    return c;
  }
  c.verdict = Verdict::Inconclusive;
  if (g.is_tree()) c.note = "unexpected for trees";
  return c;
}

std::vector<PointOnGraph> omega_limit_points(const PLMap& f, const PointOnGraph& x, std::size_t burn_in, std::size_t samples,
                                             const Rational& tol) {
  if (samples < 1) throw ValidationError("need at least one sample");
  const Graph& g = f.graph();
  PointOnGraph p = g.canonical(x);
  for (std::size_t n = 0; n < burn_in; ++n) p = f.evaluate(p);
  std::vector<PointOnGraph> cloud;
  for (std::size_t n = 0; n < samples; ++n) {
    bool near = std::any_of(cloud.begin(), cloud.end(), [&](const PointOnGraph& q) { return distance(g, p, q) <= tol; });
    if (!near) cloud.push_back(p);
    p = f.evaluate(p);
  }
  std::sort(cloud.begin(), cloud.end(), [](const PointOnGraph& a, const PointOnGraph& b) {
    return a.edge < b.edge || (a.edge == b.edge && a.t < b.t);
  });
  return cloud;
}

}  // namespace hyperdyn
