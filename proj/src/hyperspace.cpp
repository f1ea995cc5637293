#include "hyperdyn/hyperspace.hpp"

#include "hyperdyn/errors.hpp"

#include <optional>
#include <vector>

namespace hyperdyn {

namespace {

Rational in_edge_gap(const Rational& t, const Interval& iv) {
  if (t < iv.lo) return iv.lo - t;
  if (t > iv.hi) return t - iv.hi;
  return 0;
}

/// dist at coordinate t of edge e, given the distances from its end vertices to B.
Rational edge_distance(const Rational& t, const Rational& du, const Rational& dv, const std::vector<Interval>& same_edge) {
  Rational best = min(Rational(t + du), Rational(1 - t + dv));
  for (const auto& iv : same_edge) {
    Rational d = in_edge_gap(t, iv);
    if (d < best) best = d;
  }
  return best;
}

/// An affine form a*s + b*t + c in two edge coordinates.
struct Form {
  int a;
  int b;
  Rational c;
  Rational at(const Rational& s, const Rational& t) const { return a * s + b * t + c; }
};

/// The line a*s + b*t = c.
struct Line {
  Rational a, b, c;
};

std::optional<std::pair<Rational, Rational>> meet(const Line& p, const Line& q) {
  Rational det = p.a * q.b - p.b * q.a;
  if (det == 0) return std::nullopt;
  return std::make_pair(Rational((p.c * q.b - p.b * q.c) / det), Rational((p.a * q.c - p.c * q.a) / det));
}

/// max over the box I x J (optionally cut by s <= t) of the min of the forms.
/// The objective is concave, so the maximum sits on a vertex of the arrangement
/// made of the region's boundary and the lines where two forms agree.
Rational max_of_min(const std::vector<Form>& forms, const Interval& I, const Interval& J, bool below_diagonal) {
  std::vector<Line> lines{{1, 0, I.lo}, {1, 0, I.hi}, {0, 1, J.lo}, {0, 1, J.hi}};
  if (below_diagonal) lines.push_back({1, -1, 0});
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      int da = forms[i].a - forms[j].a;
      int db = forms[i].b - forms[j].b;
      if (da == 0 && db == 0) continue;
      lines.push_back({da, db, forms[j].c - forms[i].c});
    }
  std::optional<Rational> best;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      auto p = meet(lines[i], lines[j]);
      if (!p) continue;
      const auto& [s, t] = *p;
      if (s < I.lo || s > I.hi || t < J.lo || t > J.hi) continue;
      if (below_diagonal && s > t) continue;
      Rational v = forms[0].at(s, t);
      for (std::size_t k = 1; k < forms.size(); ++k) {
        Rational w = forms[k].at(s, t);
        if (w < v) v = w;
      }
      if (!best || v > *best) best = v;
    }
  return best ? *best : Rational(0);
}

}  // namespace

Rational vertex_distance_to_set(const Graph& g, VertexId v, const IntervalSet& b) {
  std::optional<Rational> best;
  for (EdgeId e = 0; e < b.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    for (const auto& iv : b.on_edge(e)) {
      Rational d = min(Rational(g.vertex_distance(v, ed.u) + iv.lo), Rational(g.vertex_distance(v, ed.v) + 1 - iv.hi));
      if (!best || d < *best) best = d;
    }
  }
  if (!best) throw ValidationError("distance to an empty set");
  return *best;
}

Rational distance_to_set(const Graph& g, const PointOnGraph& raw, const IntervalSet& b) {
  const PointOnGraph x = g.canonical(raw);
  const Edge& ed = g.edge(x.edge);
  return edge_distance(x.t, vertex_distance_to_set(g, ed.u, b), vertex_distance_to_set(g, ed.v, b), b.on_edge(x.edge));
}

Rational directed_hausdorff(const Graph& g, const IntervalSet& a, const IntervalSet& b) {
  Rational worst = 0;
  std::vector<Rational> du(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) du[v] = vertex_distance_to_set(g, v, b);
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& list = a.on_edge(e);
    if (list.empty()) continue;
    const Edge& ed = g.edge(e);
    const Rational& DU = du[ed.u];
    const Rational& DV = du[ed.v];
    const auto& same = b.on_edge(e);
    // Increasing pieces t + alpha and decreasing pieces beta - t of dist(., B).
    std::vector<Rational> alphas{DU}, betas{1 + DV};
    for (const auto& iv : same) {
      alphas.push_back(-iv.hi);
      betas.push_back(iv.lo);
    }
    for (const auto& iv : list) {
      std::vector<Rational> cand{iv.lo, iv.hi};
      for (const auto& j : same) {
        cand.push_back(j.lo);
        cand.push_back(j.hi);
      }
      for (const auto& al : alphas)
        for (const auto& be : betas) cand.push_back((be - al) / 2);
      for (const auto& t : cand) {
        if (t < iv.lo || t > iv.hi) continue;
        Rational d = edge_distance(t, DU, DV, same);
        if (d > worst) worst = d;
      }
    }
  }
  return worst;
}

Rational hausdorff_distance(const Graph& g, const Continuum& a, const Continuum& b) {
  if (a == b) return 0;
  return max(directed_hausdorff(g, a.intervals(), b.intervals()), directed_hausdorff(g, b.intervals(), a.intervals()));
}

IntervalSet neighborhood_set(const Graph& g, const IntervalSet& a, const Rational& eps) {
  if (eps < 0) throw ValidationError("neighbourhood radius must be nonnegative");
  IntervalSet out(g.edge_count());
  std::vector<Rational> dist(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) dist[v] = vertex_distance_to_set(g, v, a);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    for (const auto& iv : a.on_edge(e)) out.add(e, max(Rational(iv.lo - eps), Rational(0)), min(Rational(iv.hi + eps), Rational(1)));
    if (dist[ed.u] <= eps) out.add(e, 0, min(Rational(eps - dist[ed.u]), Rational(1)));
    if (dist[ed.v] <= eps) out.add(e, max(Rational(1 - (eps - dist[ed.v])), Rational(0)), 1);
  }
  out.canonicalize(g);
  return out;
}

Continuum neighborhood(const Graph& g, const Continuum& a, const Rational& eps) {
  return Continuum::from_intervals(g, neighborhood_set(g, a.intervals(), eps));
}

Rational diameter(const Graph& g, const Continuum& a) {
  struct Item {
    EdgeId e;
    Interval iv;
  };
  std::vector<Item> items;
  for (EdgeId e = 0; e < a.intervals().edge_count(); ++e)
    for (const auto& iv : a.intervals().on_edge(e)) items.push_back({e, iv});
  if (items.size() == 1 && items[0].iv.degenerate()) return 0;

  Rational best = 0;
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i; j < items.size(); ++j) {
      const Edge& e1 = g.edge(items[i].e);
      const Edge& e2 = g.edge(items[j].e);
      std::vector<Form> forms{
          {1, 1, Rational(g.vertex_distance(e1.u, e2.u))},
          {1, -1, Rational(1 + g.vertex_distance(e1.u, e2.v))},
          {-1, 1, Rational(1 + g.vertex_distance(e1.v, e2.u))},
          {-1, -1, Rational(2 + g.vertex_distance(e1.v, e2.v))},
      };
      Rational v;
      if (items[i].e != items[j].e) {
        v = max_of_min(forms, items[i].iv, items[j].iv, false);
      } else {
        // On one edge the direct route t - s competes. Intervals are sorted, so
        // s <= t covers every pair up to symmetry.
        forms.push_back({-1, 1, 0});
        v = max_of_min(forms, items[i].iv, items[j].iv, true);
      }
      if (v > best) best = v;
    }
  return best;
}

}  // namespace hyperdyn
