#include "hyperdyn/builtins.hpp"

#include "hyperdyn/errors.hpp"

#include <algorithm>

namespace hyperdyn {

namespace {

using Nodes = std::vector<std::pair<Rational, Rational>>;

Rational eval_nodes(const Nodes& n, const Rational& x) {
  for (std::size_t i = 0; i + 1 < n.size(); ++i)
    if (x <= n[i + 1].first) return n[i].second + (n[i + 1].second - n[i].second) * (x - n[i].first) / (n[i + 1].first - n[i].first);
  return n.back().second;
}

/// Nodes of the truncated tent with slope s.
Nodes truncated_tent_nodes(const Rational& s) {
  if (s <= 2) throw ValidationError("truncated tent needs s > 2");
  Rational inv = 1 / s;
  return {{0, 0}, {inv, 1}, {1 - inv, 1}, {1, 0}};
}

/// One renormalization step: the result restricted to [1/4,1/2] under the second
/// iterate is g, rescaled by x -> 4x - 1.
Nodes double_period(const Nodes& g) {
  Rational at_three_quarters = rat(1, 4) + eval_nodes(g, 1) / 4;
  Nodes out{{0, 0}, {rat(1, 4), 1}, {rat(1, 2), rat(3, 4)}, {rat(3, 4), at_three_quarters}};
  Nodes tail;
  for (const auto& [x, y] : g) tail.emplace_back(1 - x / 4, rat(1, 4) + y / 4);
  std::reverse(tail.begin(), tail.end());
  out.insert(out.end(), tail.begin() + 1, tail.end());
  return out;
}

Continuum arc_interval(const Graph& g, const Rational& lo, const Rational& hi) { return Continuum::interval(g, 0, lo, hi); }

Rational parse_arg(std::string_view name, std::string_view arg) {
  try {
    return parse_rational(arg);
  } catch (const ParseError&) {
    throw ValidationError("bad argument '" + std::string(arg) + "' for builtin '" + std::string(name) + "'");
  }
}

unsigned parse_count(std::string_view name, std::string_view arg, unsigned lo, unsigned hi) {
  Rational r = parse_arg(name, arg);
  if (r.get_den() != 1 || r < lo || r > hi)
    throw ValidationError("builtin '" + std::string(name) + "' needs an integer in [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  return static_cast<unsigned>(r.get_num().get_ui());
}

}  // namespace

std::shared_ptr<const Graph> arc_graph() { return std::make_shared<const Graph>(Graph::build({{"e0", "v0", "v1"}})); }

std::shared_ptr<const Graph> star_graph(const std::vector<std::string>& arm_names) {
  std::vector<EdgeSpec> specs;
  for (const auto& a : arm_names) specs.push_back({a, "c", "leaf_" + a});
  return std::make_shared<const Graph>(Graph::build(specs));
}

PLMap interval_map(std::shared_ptr<const Graph> g, const std::vector<std::pair<Rational, Rational>>& nodes) {
  if (nodes.size() < 2 || nodes.front().first != 0 || nodes.back().first != 1) throw ValidationError("interval map nodes must span [0,1]");
  std::vector<PieceSpec> pieces;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    pieces.push_back(PieceSpec{0, nodes[i].first, nodes[i + 1].first, {PathSegment{0, nodes[i].second, nodes[i + 1].second}}});
  return PLMap::build(std::move(g), std::move(pieces));
}

Builtin tent() {
  auto g = arc_graph();
  Builtin b{"tent", g, interval_map(g, {{0, 0}, {rat(1, 2), 1}, {1, 0}}), {}, {}, false, "full tent map, slopes +-2"};
  b.continua.emplace("whole", Continuum::whole(*g));
  return b;
}

Builtin truncated_tent(const Rational& s) {
  auto g = arc_graph();
  Builtin b{"truncated-tent(" + to_string(s) + ")", g, interval_map(g, truncated_tent_nodes(s)), {}, {}, false,
            "tent of slope s capped at height 1"};
  b.continua.emplace("plateau", arc_interval(*g, 1 / s, 1 - 1 / s));
  b.continua.emplace("whole", Continuum::whole(*g));
  return b;
}

Builtin star_3_4_2_5() {
  const unsigned k[4] = {3, 4, 2, 5};
  std::vector<std::string> arms;
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = 0; j < k[i]; ++j) arms.push_back("a" + std::to_string(i + 1) + "_" + std::to_string(j));
  auto g = star_graph(arms);
  std::vector<PieceSpec> pieces;
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = 0; j < k[i]; ++j) {
      EdgeId from = *g->find_edge("a" + std::to_string(i + 1) + "_" + std::to_string(j));
      EdgeId to = *g->find_edge("a" + std::to_string(i + 1) + "_" + std::to_string((j + 1) % k[i]));
      pieces.push_back(PieceSpec{from, 0, 1, {PathSegment{to, 0, 1}}});
    }
  Builtin b{"star-3-4-2-5", g, PLMap::build(g, std::move(pieces)), {}, {}, false,
            "14-arm star; arm groups of sizes 3,4,2,5 rotated cyclically"};
  auto arm = [&](const std::string& name) {
    IntervalSet s(g->edge_count());
    s.add(*g->find_edge(name), 0, 1);
    return s;
  };
  IntervalSet a = arm("a1_0");
  a.add_all(arm("a2_0"));
  IntervalSet bset = arm("a1_0");
  bset.add_all(arm("a3_0"));
  bset.add_all(arm("a4_0"));
  b.continua.emplace("A", Continuum::from_intervals(*g, a));
  b.continua.emplace("B", Continuum::from_intervals(*g, bset));
  b.continua.emplace("K", Continuum::from_intervals(*g, arm("a1_0")));
  b.continua.emplace("C", Continuum::from_intervals(*g, arm("a3_0")));
  return b;
}

Builtin arm_rotation(unsigned k) {
  if (k < 1) throw ValidationError("arm-rotation needs k >= 1");
  std::vector<std::string> arms;
  for (unsigned j = 0; j < k; ++j) arms.push_back("a" + std::to_string(j));
  auto g = star_graph(arms);
  std::vector<PieceSpec> pieces;
  for (unsigned j = 0; j < k; ++j) pieces.push_back(PieceSpec{j, 0, 1, {PathSegment{(j + 1) % k, 0, 1}}});
  Builtin b{"arm-rotation(" + std::to_string(k) + ")", g, PLMap::build(g, std::move(pieces)), {}, {}, false,
            "k-star, arms permuted cyclically"};
  b.continua.emplace("arm", Continuum::interval(*g, 0, 0, 1));
  b.continua.emplace("whole", Continuum::whole(*g));
  return b;
}

namespace {

struct DoublingTower {
  Nodes nodes;
  std::vector<std::pair<Rational, Rational>> chain;  // J_1, J_2, J_4, ...
  std::pair<Rational, Rational> residual;
};

DoublingTower doubling_tower(unsigned depth) {
  if (depth < 1 || depth > 8) throw ValidationError("period-doubling depth must be in [1,8]");
  DoublingTower t;
  t.nodes = truncated_tent_nodes(3);
  std::pair<Rational, Rational> j{0, 1};
  t.chain.push_back(j);
  t.residual = {rat(1, 3), rat(2, 3)};
  for (unsigned d = 1; d < depth; ++d) {
    t.nodes = double_period(t.nodes);
    j = {rat(1, 4) + j.first / 4, rat(1, 4) + j.second / 4};
    t.chain.push_back(j);
    t.residual = {rat(1, 4) + t.residual.first / 4, rat(1, 4) + t.residual.second / 4};
  }
  return t;
}

}  // namespace

Builtin period_doubling(unsigned depth) {
  auto g = arc_graph();
  DoublingTower t = doubling_tower(depth);
  Builtin b{"period-doubling(" + std::to_string(depth) + ")", g, interval_map(g, t.nodes), {}, {}, false,
            "renormalized truncated tent with nested periodic intervals of periods 1,2,4,..."};
  for (std::size_t i = 0; i < t.chain.size(); ++i) {
    const auto& [lo, hi] = t.chain[i];
    b.continua.emplace("J" + std::to_string(1u << i), arc_interval(*g, lo, hi));
    b.markov_seeds.push_back({0, lo});
    b.markov_seeds.push_back({0, hi});
  }
  b.continua.emplace("W", arc_interval(*g, t.residual.first, t.residual.second));
  b.markov_seeds.push_back({0, t.residual.first});
  b.markov_seeds.push_back({0, t.residual.second});
  return b;
}

Builtin period_doubling_pair(unsigned depth) {
  auto g = star_graph({"left", "right"});
  DoublingTower t = doubling_tower(depth);
  std::vector<PieceSpec> pieces;
  for (EdgeId e = 0; e < 2; ++e)
    for (std::size_t i = 0; i + 1 < t.nodes.size(); ++i)
      pieces.push_back(PieceSpec{e, t.nodes[i].first, t.nodes[i + 1].first, {PathSegment{e, t.nodes[i].second, t.nodes[i + 1].second}}});
  Builtin b{"period-doubling-pair(" + std::to_string(depth) + ")", g, PLMap::build(g, std::move(pieces)), {}, {}, false,
            "two arms at a fixed centre, each carrying the period-doubling map"};
  for (EdgeId e = 0; e < 2; ++e) {
    std::string side = e == 0 ? "L" : "R";
    for (std::size_t i = 0; i < t.chain.size(); ++i) {
      const auto& [lo, hi] = t.chain[i];
      b.continua.emplace(side + "J" + std::to_string(1u << i), Continuum::interval(*g, e, lo, hi));
      b.markov_seeds.push_back({e, lo});
      b.markov_seeds.push_back({e, hi});
    }
    b.continua.emplace(side + "W", Continuum::interval(*g, e, t.residual.first, t.residual.second));
    b.markov_seeds.push_back({e, t.residual.first});
    b.markov_seeds.push_back({e, t.residual.second});
  }
  return b;
}

Builtin denjoy_approx(const Rational& r) {
  if (r <= 0 || r >= 1) throw ValidationError("denjoy-approx needs a rotation number in (0,1)");
  auto g = std::make_shared<const Graph>(Graph::build({{"e0", "o", "o"}}));
  std::vector<PieceSpec> pieces{{0, 0, 1 - r, {PathSegment{0, r, 1}}}, {0, 1 - r, 1, {PathSegment{0, 0, r}}}};
  Builtin b{"denjoy-approx(" + to_string(r) + ")", g, PLMap::build(g, std::move(pieces)), {}, {}, true,
            "rigid rotation of a circle by a rational angle; approximate stand-in only"};
  b.continua.emplace("arc", Continuum::interval(*g, 0, 0, r / 2));
  return b;
}

Builtin contracting() {
  auto g = arc_graph();
  Builtin b{"contracting", g, interval_map(g, {{0, 0}, {rat(1, 2), rat(1, 4)}, {1, 1}}), {}, {}, false,
            "attracting fixed point at 0, repelling at 1"};
  b.continua.emplace("A", arc_interval(*g, rat(1, 4), rat(1, 2)));
  return b;
}

Builtin flip() {
  auto g = arc_graph();
  Builtin b{"flip", g, interval_map(g, {{0, 1}, {1, 0}}), {}, {}, false, "reflection x -> 1 - x"};
  b.continua.emplace("left", arc_interval(*g, 0, rat(1, 2)));
  return b;
}

std::vector<std::string> builtin_names() {
  return {"tent", "truncated-tent(s)", "star-3-4-2-5", "arm-rotation(k)", "period-doubling(depth)",
          "period-doubling-pair(depth)", "denjoy-approx(p/q)", "contracting", "flip"};
}

Builtin make_builtin(std::string_view spec) {
  std::string_view name = spec;
  std::string_view arg;
  if (auto open = spec.find('('); open != std::string_view::npos) {
    if (spec.back() != ')') throw ValidationError("malformed builtin '" + std::string(spec) + "'");
    name = spec.substr(0, open);
    arg = spec.substr(open + 1, spec.size() - open - 2);
  }
  auto no_arg = [&] {
    if (!arg.empty()) throw ValidationError("builtin '" + std::string(name) + "' takes no argument");
  };
  if (name == "tent") return no_arg(), tent();
  if (name == "star-3-4-2-5") return no_arg(), star_3_4_2_5();
  if (name == "contracting") return no_arg(), contracting();
  if (name == "flip") return no_arg(), flip();
  if (name == "truncated-tent") return truncated_tent(arg.empty() ? Rational(3) : parse_arg(name, arg));
  if (name == "arm-rotation") return arm_rotation(parse_count(name, arg.empty() ? "3" : arg, 1, 64));
  if (name == "period-doubling") return period_doubling(parse_count(name, arg.empty() ? "4" : arg, 1, 8));
  if (name == "period-doubling-pair") return period_doubling_pair(parse_count(name, arg.empty() ? "4" : arg, 1, 8));
  if (name == "denjoy-approx") return denjoy_approx(parse_arg(name, arg.empty() ? "1/3" : arg));
  throw ValidationError("unknown builtin '" + std::string(name) + "'");
}

CollapseMap truncated_tent_collapse(const Rational& s, unsigned depth) {
  if (s <= 2) throw ValidationError("truncated tent needs s > 2");
  if (depth > 20) throw ResourceCap("collapse depth above 20");
  std::vector<Interval> level{{0, 1}};
  for (unsigned d = 0; d < depth; ++d) {
    std::vector<Interval> next;
    for (const auto& iv : level) {
      Rational w = (iv.hi - iv.lo) / s;
      next.push_back({iv.lo, iv.lo + w});
      next.push_back({iv.hi - w, iv.hi});
    }
    level = std::move(next);
  }
  const Rational cells = Rational(mpz_class(1) << depth);
  Nodes nodes;
  for (std::size_t i = 0; i < level.size(); ++i) {
    Rational y0 = Rational(static_cast<long>(i)) / cells;
    Rational y1 = Rational(static_cast<long>(i + 1)) / cells;
    if (nodes.empty() || nodes.back().first != level[i].lo) nodes.emplace_back(level[i].lo, y0);
    nodes.emplace_back(level[i].hi, y1);
  }
  auto g = arc_graph();
  return CollapseMap{interval_map(g, nodes), std::move(level)};
}

}  // namespace hyperdyn
