#include "hyperdyn/continuum.hpp"

#include "hyperdyn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace hyperdyn {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::size_t combine(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

void IntervalSet::add(EdgeId e, Rational lo, Rational hi) {
  if (e >= per_edge_.size()) throw ValidationError("interval on unknown edge");
  if (lo > hi) std::swap(lo, hi);
  if (lo < 0 || hi > 1) throw ValidationError("interval outside [0,1]");
  per_edge_[e].push_back(Interval{std::move(lo), std::move(hi)});
}

void IntervalSet::add_all(const IntervalSet& other) {
  for (EdgeId e = 0; e < other.per_edge_.size(); ++e)
    for (const auto& iv : other.per_edge_[e]) per_edge_.at(e).push_back(iv);
}

void IntervalSet::canonicalize(const Graph& g) {
  if (per_edge_.size() != g.edge_count()) throw ValidationError("interval set built for a different graph");
  const std::size_t nv = g.vertex_count();
  std::vector<char> vertex_mentioned(nv, 0);
  std::vector<char> vertex_covered(nv, 0);

  for (EdgeId e = 0; e < per_edge_.size(); ++e) {
    auto& list = per_edge_[e];
    const Edge& ed = g.edge(e);
    // Pull out degenerate vertex points; they are re-added below if needed.
    std::vector<Interval> kept;
    kept.reserve(list.size());
    for (auto& iv : list) {
      if (iv.degenerate() && (iv.lo == 0 || iv.lo == 1)) {
        vertex_mentioned[iv.lo == 0 ? ed.u : ed.v] = 1;
      } else {
        kept.push_back(std::move(iv));
      }
    }
    std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) {
      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> merged;
    for (auto& iv : kept) {
      if (!merged.empty() && iv.lo <= merged.back().hi) {
        if (iv.hi > merged.back().hi) merged.back().hi = iv.hi;
      } else {
        merged.push_back(std::move(iv));
      }
    }
    if (!merged.empty()) {
      if (merged.front().lo == 0) vertex_covered[ed.u] = 1;
      if (merged.back().hi == 1) vertex_covered[ed.v] = 1;
    }
    list = std::move(merged);
  }

  for (VertexId v = 0; v < nv; ++v) {
    if (!vertex_mentioned[v] || vertex_covered[v]) continue;
    PointOnGraph p = g.vertex_point(v);
    auto& list = per_edge_[p.edge];
    if (p.t == 0)
      list.insert(list.begin(), Interval{0, 0});
    else
      list.push_back(Interval{1, 1});
  }
}

bool IntervalSet::empty() const {
  return std::all_of(per_edge_.begin(), per_edge_.end(), [](const auto& l) { return l.empty(); });
}

std::size_t IntervalSet::interval_count() const {
  std::size_t n = 0;
  for (const auto& l : per_edge_) n += l.size();
  return n;
}

bool IntervalSet::contains_vertex(const Graph& g, VertexId v) const {
  for (EdgeId e : g.incident_edges(v)) {
    const Edge& ed = g.edge(e);
    const auto& list = per_edge_[e];
    if (list.empty()) continue;
    if (ed.u == v && list.front().lo == 0) return true;
    if (ed.v == v && list.back().hi == 1) return true;
  }
  return false;
}

bool IntervalSet::contains_point(const Graph& g, const PointOnGraph& raw) const {
  PointOnGraph p = g.canonical(raw);
  if (auto v = g.vertex_at(p)) return contains_vertex(g, *v);
  for (const auto& iv : per_edge_[p.edge])
    if (iv.lo <= p.t && p.t <= iv.hi) return true;
  return false;
}

std::size_t IntervalSet::component_count(const Graph& g) const {
  std::size_t n = interval_count();
  if (n == 0) return 0;
  UnionFind uf(n + g.vertex_count());
  std::size_t idx = 0;
  for (EdgeId e = 0; e < per_edge_.size(); ++e) {
    const Edge& ed = g.edge(e);
    for (const auto& iv : per_edge_[e]) {
      if (iv.lo == 0) uf.unite(idx, n + ed.u);
      if (iv.hi == 1) uf.unite(idx, n + ed.v);
      ++idx;
    }
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) roots.push_back(uf.find(i));
  std::sort(roots.begin(), roots.end());
  return static_cast<std::size_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
}

Continuum Continuum::from_intervals(const Graph& g, IntervalSet set) {
  set.canonicalize(g);
  if (set.empty()) throw ValidationError("continuum must be nonempty");
  if (set.component_count(g) != 1) throw ValidationError("continuum must be connected");
  std::size_t h = 0;
  for (EdgeId e = 0; e < set.edge_count(); ++e)
    for (const auto& iv : set.on_edge(e)) {
      h = combine(h, e);
      h = combine(h, hash_value(iv.lo));
      h = combine(h, hash_value(iv.hi));
    }
  return Continuum(std::move(set), h);
}

Continuum Continuum::point(const Graph& g, const PointOnGraph& p) {
  IntervalSet s(g.edge_count());
  s.add_point(g.canonical(p));
  return from_intervals(g, std::move(s));
}

Continuum Continuum::interval(const Graph& g, EdgeId e, Rational lo, Rational hi) {
  IntervalSet s(g.edge_count());
  s.add(e, std::move(lo), std::move(hi));
  return from_intervals(g, std::move(s));
}

Continuum Continuum::whole(const Graph& g) {
  IntervalSet s(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) s.add(e, 0, 1);
  return from_intervals(g, std::move(s));
}

bool Continuum::is_degenerate() const {
  return set_.interval_count() == 1 && as_point().has_value();
}

std::optional<PointOnGraph> Continuum::as_point() const {
  if (set_.interval_count() != 1) return std::nullopt;
  for (EdgeId e = 0; e < set_.edge_count(); ++e)
    for (const auto& iv : set_.on_edge(e))
      if (iv.degenerate()) return PointOnGraph{e, iv.lo};
  return std::nullopt;
}

bool subset(const Graph& g, const IntervalSet& a, const IntervalSet& b) {
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const auto& bl = b.on_edge(e);
    for (const auto& iv : a.on_edge(e)) {
      if (iv.degenerate() && (iv.lo == 0 || iv.lo == 1)) {
        if (!b.contains_vertex(g, iv.lo == 0 ? ed.u : ed.v)) return false;
        continue;
      }
      bool inside = std::any_of(bl.begin(), bl.end(), [&](const Interval& j) { return j.lo <= iv.lo && iv.hi <= j.hi; });
      if (!inside) return false;
    }
  }
  return true;
}

bool intersects(const Graph& g, const IntervalSet& a, const IntervalSet& b) {
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& al = a.on_edge(e);
    const auto& bl = b.on_edge(e);
    std::size_t i = 0, j = 0;
    while (i < al.size() && j < bl.size()) {
      if (al[i].hi < bl[j].lo) {
        ++i;
      } else if (bl[j].hi < al[i].lo) {
        ++j;
      } else {
        return true;
      }
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (a.contains_vertex(g, v) && b.contains_vertex(g, v)) return true;
  return false;
}

std::string to_literal(const Graph& g, const IntervalSet& s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (EdgeId e = 0; e < s.edge_count(); ++e)
    for (const auto& iv : s.on_edge(e)) {
      out << (first ? " " : ", ") << g.edge(e).name << ":[" << to_string(iv.lo) << "," << to_string(iv.hi) << "]";
      first = false;
    }
  out << (first ? "}" : " }");
  return out.str();
}

IntervalSet parse_interval_set(const Graph& g, std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) { return ParseError(msg, 1, pos + 1); };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) throw fail(std::string("expected '") + c + "'");
    ++pos;
  };
  auto token_until = [&](std::string_view stops) {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && stops.find(text[pos]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (start == pos) throw fail("expected a token");
    return std::string(text.substr(start, pos - start));
  };
  auto rational_at = [&](const std::string& tok, std::size_t at) {
    try {
      return parse_rational(tok);
    } catch (const ParseError&) {
      throw ParseError("malformed rational '" + tok + "'", 1, at + 1);
    }
  };

  IntervalSet set(g.edge_count());
  expect('{');
  skip_ws();
  if (pos < text.size() && text[pos] == '}') {
    ++pos;
  } else {
    while (true) {
      std::size_t name_at = pos;
      std::string name = token_until(":");
      auto e = g.find_edge(name);
      if (!e) throw ParseError("unknown edge '" + name + "'", 1, name_at + 1);
      expect(':');
      expect('[');
      std::size_t lo_at = pos;
      Rational lo = rational_at(token_until(",]"), lo_at);
      expect(',');
      std::size_t hi_at = pos;
      Rational hi = rational_at(token_until(",]"), hi_at);
      expect(']');
      if (lo > hi || lo < 0 || hi > 1) throw ParseError("interval must satisfy 0 <= lo <= hi <= 1", 1, lo_at + 1);
      set.add(*e, lo, hi);
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      expect('}');
      break;
    }
  }
  skip_ws();
  if (pos != text.size()) throw fail("trailing characters after literal");
  set.canonicalize(g);
  return set;
}

Continuum parse_continuum(const Graph& g, std::string_view text) {
  return Continuum::from_intervals(g, parse_interval_set(g, text));
}

}  // namespace hyperdyn
