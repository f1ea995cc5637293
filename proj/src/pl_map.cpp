#include "hyperdyn/pl_map.hpp"

#include "hyperdyn/errors.hpp"

#include <algorithm>

namespace hyperdyn {

namespace {

PointOnGraph seg_start(const PathSegment& s) { return PointOnGraph{s.edge, s.from}; }
PointOnGraph seg_end(const PathSegment& s) { return PointOnGraph{s.edge, s.to}; }

int sign(const Rational& q) { return sgn(q); }

/// Drops zero-length runs and fuses collinear continuations on the same edge.
std::vector<PathSegment> normalize_path(std::vector<PathSegment> path) {
  if (path.empty()) throw ValidationError("empty image path");
  std::vector<PathSegment> out;
  for (auto& s : path) {
    if (s.from == s.to) continue;
    if (!out.empty()) {
      auto& b = out.back();
      if (b.edge == s.edge && b.to == s.from && sign(b.to - b.from) == sign(s.to - s.from)) {
        b.to = s.to;
        continue;
      }
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) out.push_back(path.front());
  return out;
}

Piece make_piece(Rational lo, Rational hi, std::vector<PathSegment> path) {
  Piece p;
  p.lo = std::move(lo);
  p.hi = std::move(hi);
  p.path = normalize_path(std::move(path));
  Rational acc = 0;
  p.cumulative.reserve(p.path.size() + 1);
  for (const auto& s : p.path) {
    p.cumulative.push_back(acc);
    acc += s.length();
  }
  p.cumulative.push_back(acc);
  return p;
}

Rational arc_at(const Piece& p, const Rational& x) { return (x - p.lo) * p.length() / (p.hi - p.lo); }
Rational domain_at(const Piece& p, const Rational& s) { return p.lo + s * (p.hi - p.lo) / p.length(); }

PointOnGraph point_at_arc(const Piece& p, const Rational& s) {
  std::size_t i = 0;
  while (i + 1 < p.path.size() && p.cumulative[i + 1] < s) ++i;
  const auto& seg = p.path[i];
  Rational off = s - p.cumulative[i];
  Rational t = seg.to >= seg.from ? Rational(seg.from + off) : Rational(seg.from - off);
  return PointOnGraph{seg.edge, t};
}

/// The part of the piece path between arc lengths s0 <= s1, in traversal order.
std::vector<PathSegment> subpath(const Piece& p, const Rational& s0, const Rational& s1) {
  if (p.plateau() || s0 == s1) {
    PointOnGraph q = p.plateau() ? seg_start(p.path.front()) : point_at_arc(p, s0);
    return {PathSegment{q.edge, q.t, q.t}};
  }
  std::vector<PathSegment> out;
  for (std::size_t i = 0; i < p.path.size(); ++i) {
    const Rational& c0 = p.cumulative[i];
    const Rational& c1 = p.cumulative[i + 1];
    Rational a = max(s0, c0);
    Rational b = min(s1, c1);
    if (a >= b) continue;
    const auto& seg = p.path[i];
    int dir = sign(seg.to - seg.from);
    out.push_back(PathSegment{seg.edge, seg.from + dir * (a - c0), seg.from + dir * (b - c0)});
  }
  return out;
}

std::vector<PathSegment> reversed(std::vector<PathSegment> path) {
  std::reverse(path.begin(), path.end());
  for (auto& s : path) std::swap(s.from, s.to);
  return path;
}

std::size_t piece_index(const std::vector<Piece>& list, const Rational& x) {
  auto it = std::lower_bound(list.begin(), list.end(), x, [](const Piece& p, const Rational& v) { return p.hi < v; });
  if (it == list.end()) --it;
  return static_cast<std::size_t>(it - list.begin());
}

PointOnGraph eval_piece(const Piece& p, const Rational& x) {
  if (p.plateau()) return seg_start(p.path.front());
  return point_at_arc(p, arc_at(p, x));
}

}  // namespace

PLMap PLMap::assemble(std::shared_ptr<const Graph> graph, std::vector<PieceSpec> specs, bool validate) {
  if (!graph) throw ValidationError("map without graph");
  const Graph& g = *graph;
  PLMap f;
  f.graph_ = graph;
  f.pieces_.assign(g.edge_count(), {});
  for (auto& s : specs) {
    if (s.edge >= g.edge_count()) throw ValidationError("piece on unknown edge");
    if (!(s.lo < s.hi)) throw ValidationError("piece on edge '" + g.edge(s.edge).name + "' has empty domain");
    for (const auto& seg : s.path) {
      if (seg.edge >= g.edge_count()) throw ValidationError("path through unknown edge");
      if (seg.from < 0 || seg.from > 1 || seg.to < 0 || seg.to > 1) throw ValidationError("path coordinate outside [0,1]");
    }
    f.pieces_[s.edge].push_back(make_piece(std::move(s.lo), std::move(s.hi), std::move(s.path)));
  }

  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto& list = f.pieces_[e];
    const std::string& name = g.edge(e).name;
    if (list.empty()) throw ValidationError("edge '" + name + "' has no pieces");
    std::sort(list.begin(), list.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    if (list.front().lo != 0 || list.back().hi != 1) throw ValidationError("pieces of edge '" + name + "' must cover [0,1]");
    for (std::size_t i = 0; i + 1 < list.size(); ++i)
      if (list[i].hi != list[i + 1].lo) throw ValidationError("pieces of edge '" + name + "' leave a gap or overlap");
    if (!validate) continue;
    for (const auto& p : list) {
      for (std::size_t i = 0; i + 1 < p.path.size(); ++i)
        if (!(g.canonical(seg_end(p.path[i])) == g.canonical(seg_start(p.path[i + 1]))))
          throw ValidationError("image path on edge '" + name + "' is not connected");
    }
    for (std::size_t i = 0; i + 1 < list.size(); ++i) {
      if (!(g.canonical(seg_end(list[i].path.back())) == g.canonical(seg_start(list[i + 1].path.front()))))
        throw ValidationError("discontinuity on edge '" + name + "' at " + to_string(list[i].hi));
    }
  }

  // Merge neighbouring pieces that continue each other at the same speed.
  for (auto& list : f.pieces_) {
    std::vector<Piece> merged;
    for (auto& p : list) {
      if (!merged.empty()) {
        Piece& b = merged.back();
        bool both_flat = b.plateau() && p.plateau() && g.canonical(seg_start(b.path.front())) == g.canonical(seg_start(p.path.front()));
        bool same_speed = !b.plateau() && !p.plateau() && b.length() * (p.hi - p.lo) == p.length() * (b.hi - b.lo);
        if (both_flat || same_speed) {
          auto path = b.path;
          if (same_speed) path.insert(path.end(), p.path.begin(), p.path.end());
          b = make_piece(b.lo, p.hi, std::move(path));
          continue;
        }
      }
      merged.push_back(std::move(p));
    }
    list = std::move(merged);
  }

  if (validate) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      std::optional<PointOnGraph> image;
      for (EdgeId e : g.incident_edges(v)) {
        const Edge& ed = g.edge(e);
        for (int end = 0; end < 2; ++end) {
          if ((end == 0 ? ed.u : ed.v) != v) continue;
          const Piece& p = end == 0 ? f.pieces_[e].front() : f.pieces_[e].back();
          PointOnGraph y = g.canonical(eval_piece(p, end == 0 ? Rational(0) : Rational(1)));
          if (image && !(*image == y)) throw ValidationError("discontinuity at vertex '" + g.vertex_name(v) + "'");
          image = y;
        }
      }
    }
  }
  return f;
}

PLMap PLMap::build(std::shared_ptr<const Graph> graph, std::vector<PieceSpec> pieces) {
  return assemble(std::move(graph), std::move(pieces), true);
}

PLMap PLMap::identity(std::shared_ptr<const Graph> graph) {
  std::vector<PieceSpec> specs;
  for (EdgeId e = 0; e < graph->edge_count(); ++e) specs.push_back(PieceSpec{e, 0, 1, {PathSegment{e, 0, 1}}});
  return build(std::move(graph), std::move(specs));
}

std::size_t PLMap::piece_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : pieces_) n += l.size();
  return n;
}

std::vector<PieceSpec> PLMap::piece_specs() const {
  std::vector<PieceSpec> out;
  for (EdgeId e = 0; e < pieces_.size(); ++e)
    for (const auto& p : pieces_[e]) out.push_back(PieceSpec{e, p.lo, p.hi, p.path});
  return out;
}

PointOnGraph PLMap::evaluate(const PointOnGraph& raw) const {
  const PointOnGraph x = graph_->canonical(raw);
  const auto& list = pieces_[x.edge];
  return graph_->canonical(eval_piece(list[piece_index(list, x.t)], x.t));
}

IntervalSet image_set(const PLMap& f, const IntervalSet& a) {
  const Graph& g = f.graph();
  IntervalSet out(g.edge_count());
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& list = f.pieces(e);
    for (const auto& iv : a.on_edge(e)) {
      if (iv.degenerate()) {
        out.add_point(f.evaluate(PointOnGraph{e, iv.lo}));
        continue;
      }
      for (std::size_t k = piece_index(list, iv.lo); k < list.size() && list[k].lo <= iv.hi; ++k) {
        const Piece& p = list[k];
        Rational x0 = max(iv.lo, p.lo);
        Rational x1 = min(iv.hi, p.hi);
        if (x0 > x1) continue;
        Rational s0 = p.plateau() ? Rational(0) : arc_at(p, x0);
        Rational s1 = p.plateau() ? Rational(0) : arc_at(p, x1);
        for (const auto& seg : subpath(p, s0, s1)) out.add(seg.edge, min(seg.from, seg.to), max(seg.from, seg.to));
      }
    }
  }
  out.canonicalize(g);
  return out;
}

Continuum image_continuum(const PLMap& f, const Continuum& a) {
  return Continuum::from_intervals(f.graph(), image_set(f, a.intervals()));
}

PLMap compose(const PLMap& outer, const PLMap& inner, std::size_t piece_cap) {
  const Graph& g = inner.graph();
  if (&g != &outer.graph() && outer.graph_ptr() != inner.graph_ptr())
    if (g.edge_count() != outer.graph().edge_count()) throw ValidationError("composing maps on different graphs");
  std::vector<PieceSpec> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const Piece& p : inner.pieces(e)) {
      if (p.plateau()) {
        PointOnGraph y = outer.evaluate(seg_start(p.path.front()));
        out.push_back(PieceSpec{e, p.lo, p.hi, {PathSegment{y.edge, y.t, y.t}}});
        continue;
      }
      for (std::size_t i = 0; i < p.path.size(); ++i) {
        const PathSegment& seg = p.path[i];
        const auto& olist = outer.pieces(seg.edge);
        const bool forward = seg.to > seg.from;
        // Cut points of this run at the outer map's breakpoints, in traversal order.
        std::vector<Rational> cuts{seg.from};
        for (const Piece& q : olist) {
          if (q.hi <= min(seg.from, seg.to) || q.hi >= max(seg.from, seg.to)) continue;
          cuts.push_back(q.hi);
        }
        cuts.push_back(seg.to);
        std::sort(cuts.begin() + 1, cuts.end() - 1);
        if (!forward) std::reverse(cuts.begin() + 1, cuts.end() - 1);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
          const Rational& t0 = cuts[k];
          const Rational& t1 = cuts[k + 1];
          Rational x0 = domain_at(p, p.cumulative[i] + abs(t0 - seg.from));
          Rational x1 = domain_at(p, p.cumulative[i] + abs(t1 - seg.from));
          const Piece& q = olist[piece_index(olist, (t0 + t1) / 2)];
          std::vector<PathSegment> path;
          if (q.plateau()) {
            path = q.path;
          } else {
            Rational a0 = arc_at(q, t0);
            Rational a1 = arc_at(q, t1);
            path = a0 <= a1 ? subpath(q, a0, a1) : reversed(subpath(q, a1, a0));
          }
          out.push_back(PieceSpec{e, std::move(x0), std::move(x1), std::move(path)});
        }
      }
      if (out.size() > piece_cap) throw PieceExplosion("composite exceeds " + std::to_string(piece_cap) + " pieces");
    }
  }
  return PLMap::assemble(inner.graph_ptr(), std::move(out), false);
}

PLMap compose_power(const PLMap& f, unsigned n, std::size_t piece_cap) {
  if (n == 0) throw ValidationError("compose_power needs n >= 1");
  PLMap acc = f;
  for (unsigned k = 1; k < n; ++k) {
    acc = compose(f, acc, piece_cap);
    if (acc.piece_count() > piece_cap) throw PieceExplosion("f^n exceeds " + std::to_string(piece_cap) + " pieces");
  }
  return acc;
}

bool FixedPointSet::intersects(const Graph& g, const IntervalSet& a) const {
  for (const auto& p : points)
    if (a.contains_point(g, p)) return true;
  return hyperdyn::intersects(g, segments, a);
}

FixedPointSet fixed_points(const PLMap& f) {
  const Graph& g = f.graph();
  FixedPointSet out{{}, IntervalSet(g.edge_count())};
  std::vector<PointOnGraph> candidates;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const Piece& p : f.pieces(e)) {
      candidates.push_back(PointOnGraph{e, p.lo});
      candidates.push_back(PointOnGraph{e, p.hi});
      if (p.plateau()) {
        const auto& s = p.path.front();
        if (s.edge == e && p.lo <= s.from && s.from <= p.hi) candidates.push_back(PointOnGraph{e, s.from});
        continue;
      }
      for (std::size_t i = 0; i < p.path.size(); ++i) {
        const auto& seg = p.path[i];
        if (seg.edge != e) continue;
        Rational xa = domain_at(p, p.cumulative[i]);
        Rational xb = domain_at(p, p.cumulative[i + 1]);
        // On [xa, xb] the image coordinate is t(x) = seg.from + slope * (x - xa).
        Rational slope = (seg.to - seg.from) / (xb - xa);
        Rational offset = seg.from - slope * xa;
        if (slope == 1) {
          if (offset == 0) out.segments.add(e, xa, xb);
          continue;
        }
        Rational x = offset / (1 - slope);
        if (xa <= x && x <= xb) candidates.push_back(PointOnGraph{e, x});
      }
    }
  }
  out.segments.canonicalize(g);
  for (const auto& c : candidates) {
    PointOnGraph x = g.canonical(c);
    if (!(f.evaluate(x) == x)) continue;
    if (out.segments.contains_point(g, x)) continue;
    if (std::find(out.points.begin(), out.points.end(), x) == out.points.end()) out.points.push_back(x);
  }
  std::sort(out.points.begin(), out.points.end(), [](const PointOnGraph& a, const PointOnGraph& b) {
    return a.edge < b.edge || (a.edge == b.edge && a.t < b.t);
  });
  return out;
}

std::vector<PointOnGraph> critical_points(const PLMap& f) {
  const Graph& g = f.graph();
  std::vector<PointOnGraph> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const Piece& p : f.pieces(e)) {
      out.push_back(PointOnGraph{e, p.lo});
      out.push_back(PointOnGraph{e, p.hi});
      for (std::size_t i = 0; i + 1 < p.path.size(); ++i) {
        out.push_back(PointOnGraph{e, domain_at(p, p.cumulative[i + 1])});
      }
    }
  }
  return out;
}

}  // namespace hyperdyn
