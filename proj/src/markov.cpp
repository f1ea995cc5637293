#include "hyperdyn/markov.hpp"

#include "hyperdyn/errors.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <unordered_set>

namespace hyperdyn {

namespace {

bool point_less(const PointOnGraph& a, const PointOnGraph& b) { return a.edge < b.edge || (a.edge == b.edge && a.t < b.t); }

}  // namespace

bool CellSet::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t CellSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

CellSet& CellSet::operator|=(const CellSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

bool CellSet::subset_of(const CellSet& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool CellSet::intersects(const CellSet& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

std::vector<std::size_t> CellSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

std::size_t CellSet::hash() const noexcept {
  std::size_t h = n_;
  for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::optional<std::size_t> MarkovData::point_index(const Graph& g, const PointOnGraph& raw) const {
  PointOnGraph p = g.canonical(raw);
  auto it = std::lower_bound(points.begin(), points.end(), p, point_less);
  if (it == points.end() || !(*it == p)) return std::nullopt;
  return static_cast<std::size_t>(it - points.begin());
}

MarkovData build_markov(const PLMap& f, const MarkovOptions& options) {
  const Graph& g = f.graph();
  std::vector<PointOnGraph> known;
  auto insert = [&](const PointOnGraph& raw) {
    PointOnGraph p = g.canonical(raw);
    auto it = std::lower_bound(known.begin(), known.end(), p, point_less);
    if (it != known.end() && *it == p) return false;
    known.insert(it, p);
    return true;
  };

  std::vector<PointOnGraph> frontier;
  auto seed = [&](const PointOnGraph& p) {
    if (insert(p)) frontier.push_back(g.canonical(p));
  };
  for (VertexId v = 0; v < g.vertex_count(); ++v) seed(g.vertex_point(v));
  for (const auto& p : critical_points(f)) seed(p);
  FixedPointSet fix = fixed_points(f);
  for (const auto& p : fix.points) seed(p);
  for (EdgeId e = 0; e < fix.segments.edge_count(); ++e)
    for (const auto& iv : fix.segments.on_edge(e)) {
      seed(PointOnGraph{e, iv.lo});
      seed(PointOnGraph{e, iv.hi});
    }
  for (const auto& p : options.extra_seeds) seed(p);

  for (unsigned round = 0; !frontier.empty(); ++round) {
    if (round >= options.depth) throw ValidationError("partition is not forward invariant within the closure depth");
    std::vector<PointOnGraph> next;
    for (const auto& p : frontier) {
      PointOnGraph y = f.evaluate(p);
      if (insert(y)) next.push_back(y);
    }
    if (known.size() > options.point_cap) throw ValidationError("partition exceeds the point cap");
    frontier = std::move(next);
  }

  MarkovData m;
  m.points = std::move(known);
  for (const auto& p : m.points) m.point_image.push_back(*m.point_index(g, f.evaluate(p)));

  std::vector<std::vector<Rational>> cuts(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) cuts[e] = {0, 1};
  for (const auto& p : m.points)
    if (p.t != 0 && p.t != 1) cuts[p.edge].push_back(p.t);
  for (auto& c : cuts) std::sort(c.begin(), c.end());

  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (std::size_t i = 0; i + 1 < cuts[e].size(); ++i) {
      MarkovCell c{e, cuts[e][i], cuts[e][i + 1], 0, 0};
      c.lo_point = *m.point_index(g, PointOnGraph{e, c.lo});
      c.hi_point = *m.point_index(g, PointOnGraph{e, c.hi});
      m.cells.push_back(std::move(c));
    }

  m.point_cells.assign(m.points.size(), {});
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    m.point_cells[m.cells[i].lo_point].push_back(i);
    if (m.cells[i].hi_point != m.cells[i].lo_point) m.point_cells[m.cells[i].hi_point].push_back(i);
  }

  // First cell index of each edge, for locating cells by coordinate.
  std::vector<std::size_t> first(g.edge_count() + 1, m.cells.size());
  for (std::size_t i = m.cells.size(); i-- > 0;) first[m.cells[i].edge] = i;
  for (EdgeId e = g.edge_count(); e-- > 0;)
    if (first[e] == m.cells.size()) first[e] = first[e + 1];

  for (const auto& c : m.cells) {
    IntervalSet dom(g.edge_count());
    dom.add(c.edge, c.lo, c.hi);
    IntervalSet img = image_set(f, dom);
    CellSet covered(m.cells.size());
    std::optional<std::size_t> collapsed;
    for (EdgeId e = 0; e < img.edge_count(); ++e)
      for (const auto& iv : img.on_edge(e)) {
        if (iv.degenerate()) {
          collapsed = m.point_index(g, PointOnGraph{e, iv.lo});
          continue;
        }
        const auto& cu = cuts[e];
        if (!std::binary_search(cu.begin(), cu.end(), iv.lo) || !std::binary_search(cu.begin(), cu.end(), iv.hi))
          throw ValidationError("cell image is not a union of partition cells");
        for (std::size_t k = first[e]; k < m.cells.size() && m.cells[k].edge == e; ++k)
          if (iv.lo <= m.cells[k].lo && m.cells[k].hi <= iv.hi) covered.set(k);
      }
    if (covered.none() && !collapsed) throw ValidationError("collapsed cell image is not a partition point");
    m.collapsed_to.push_back(covered.none() ? *collapsed : 0);
    m.cell_image.push_back(covered.none() ? CellSet{} : std::move(covered));
  }
  return m;
}

Continuum to_continuum(const Graph& g, const MarkovData& m, const AlignedElement& a) {
  if (a.point) return Continuum::point(g, m.points[*a.point]);
  IntervalSet s(g.edge_count());
  for (std::size_t i : a.cells.members()) s.add(m.cells[i].edge, m.cells[i].lo, m.cells[i].hi);
  return Continuum::from_intervals(g, std::move(s));
}

std::optional<AlignedElement> aligned_element(const Graph& g, const MarkovData& m, const Continuum& c) {
  if (auto p = c.as_point()) {
    auto idx = m.point_index(g, *p);
    if (!idx) return std::nullopt;
    return AlignedElement{idx, {}};
  }
  CellSet cells(m.cells.size());
  const IntervalSet& s = c.intervals();
  for (EdgeId e = 0; e < s.edge_count(); ++e)
    for (const auto& iv : s.on_edge(e)) {
      bool lo_ok = false, hi_ok = false;
      for (std::size_t k = 0; k < m.cells.size(); ++k) {
        const auto& cell = m.cells[k];
        if (cell.edge != e) continue;
        if (cell.lo == iv.lo) lo_ok = true;
        if (cell.hi == iv.hi) hi_ok = true;
        if (iv.lo <= cell.lo && cell.hi <= iv.hi) cells.set(k);
      }
      if (!lo_ok || !hi_ok) return std::nullopt;
    }
  return AlignedElement{std::nullopt, std::move(cells)};
}

AlignedElement aligned_image(const MarkovData& m, const AlignedElement& a) {
  if (a.point) return AlignedElement{m.point_image[*a.point], {}};
  CellSet out(m.cells.size());
  std::optional<std::size_t> collapsed;
  for (std::size_t i : a.cells.members()) {
    if (m.cell_image[i].size() == 0) {
      collapsed = m.collapsed_to[i];
    } else {
      out |= m.cell_image[i];
    }
  }
  if (out.none()) return AlignedElement{collapsed, {}};
  return AlignedElement{std::nullopt, std::move(out)};
}

bool cells_connected(const MarkovData& m, const CellSet& s) {
  auto members = s.members();
  if (members.empty()) return false;
  CellSet seen(m.cells.size());
  std::deque<std::size_t> queue{members.front()};
  seen.set(members.front());
  std::size_t reached = 1;
  while (!queue.empty()) {
    std::size_t c = queue.front();
    queue.pop_front();
    for (std::size_t p : {m.cells[c].lo_point, m.cells[c].hi_point})
      for (std::size_t d : m.point_cells[p])
        if (s.test(d) && !seen.test(d)) {
          seen.set(d);
          ++reached;
          queue.push_back(d);
        }
  }
  return reached == members.size();
}

void for_each_connected_cell_set(const MarkovData& m, std::size_t cap, const std::function<void(const CellSet&)>& visit) {
  std::unordered_set<CellSet, CellSetHash> seen;
  std::deque<CellSet> queue;
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    CellSet s(m.cells.size());
    s.set(i);
    seen.insert(s);
    queue.push_back(std::move(s));
  }
  while (!queue.empty()) {
    CellSet s = std::move(queue.front());
    queue.pop_front();
    visit(s);
    for (std::size_t c : s.members())
      for (std::size_t p : {m.cells[c].lo_point, m.cells[c].hi_point})
        for (std::size_t d : m.point_cells[p]) {
          if (s.test(d)) continue;
          CellSet t = s;
          t.set(d);
          if (seen.insert(t).second) {
            if (seen.size() > cap) throw CombinatorialBlowup("more than " + std::to_string(cap) + " aligned subcontinua");
            queue.push_back(std::move(t));
          }
        }
  }
}

}  // namespace hyperdyn
