#include "hyperdyn/scenario.hpp"

#include "hyperdyn/checkers.hpp"
#include "hyperdyn/dynamics.hpp"
#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/io.hpp"
#include "hyperdyn/markov.hpp"
#include "hyperdyn/random_maps.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

namespace hyperdyn {

namespace {

constexpr std::size_t kMaxListedChecks = 50;

enum class ParamType { Integer, Rational, RationalList, ContinuumRef, Point };

struct ParamSpec {
  std::string key;
  ParamType type;
  bool required = false;
};

const std::map<std::string, std::vector<ParamSpec>>& kind_table() {
  using T = ParamType;
  static const std::map<std::string, std::vector<ParamSpec>> table{
      {"classify", {{"continuum", T::ContinuumRef, true}, {"horizon", T::Integer}, {"tol", T::Rational}, {"period_cap", T::Integer}}},
      {"detect-period", {{"continuum", T::ContinuumRef, true}, {"horizon", T::Integer}}},
      {"orbit", {{"continuum", T::ContinuumRef, true}, {"horizon", T::Integer}, {"tol", T::Rational}}},
      {"asymptotic", {{"continuum", T::ContinuumRef, true}, {"horizon", T::Integer}, {"tol", T::Rational}, {"period_cap", T::Integer}}},
      {"check-period-bound", {{"continuum", T::ContinuumRef}, {"horizon", T::Integer}, {"period_cap", T::Integer}}},
      {"check-nesting",
       {{"continuum", T::ContinuumRef}, {"continuum2", T::ContinuumRef}, {"horizon", T::Integer}, {"period_cap", T::Integer}}},
      {"check-recurrence", {{"horizon", T::Integer}, {"tol", T::Rational}}},
      {"check-center", {{"depth", T::Integer}, {"horizon", T::Integer}, {"tol", T::Rational}, {"period_cap", T::Integer}}},
      {"verify-cycle", {{"continuum", T::ContinuumRef, true}, {"period", T::Integer, true}}},
      {"enumerate-periodic", {{"period_cap", T::Integer}}},
      {"probe-equicontinuity",
       {{"continuum", T::ContinuumRef, true},
        {"eps", T::RationalList, true},
        {"gamma", T::RationalList},
        {"horizon", T::Integer},
        {"samples", T::Integer}}},
      {"omega-limit", {{"point", T::Point, true}, {"burn_in", T::Integer}, {"samples", T::Integer}, {"tol", T::Rational}}},
  };
  return table;
}

/// Inclusive ranges for integer parameters.
const std::map<std::string, std::pair<std::uint64_t, std::uint64_t>>& integer_ranges() {
  static const std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> r{
      {"horizon", {1, 1000000}}, {"period_cap", {1, 4096}}, {"depth", {2, 16}},
      {"period", {1, 100000}},   {"samples", {1, 100000}},  {"burn_in", {0, 10000000}},
  };
  return r;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

bool is_number(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'; });
}

std::vector<std::string> split_list(std::string_view raw) {
  std::string body = trim(raw);
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "]";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

struct RawValue {
  std::string text;
  bool quoted = false;
};

/// The value after `=`, up to a comment.
RawValue read_value(std::string_view line, std::size_t pos, std::size_t line_no) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  if (pos >= line.size()) throw ParseError("missing value", line_no, pos + 1);
  RawValue v;
  std::size_t end;
  if (line[pos] == '"') {
    v.quoted = true;
    std::size_t i = pos + 1;
    for (; i < line.size() && line[i] != '"'; ++i) {
      if (line[i] == '\\' && i + 1 < line.size()) ++i;
      v.text += line[i];
    }
    if (i >= line.size()) throw ParseError("unterminated string", line_no, pos + 1);
    end = i + 1;
  } else if (line[pos] == '[') {
    std::size_t close = line.find(']', pos);
    if (close == std::string_view::npos) throw ParseError("unterminated list", line_no, pos + 1);
    v.text = join_list(split_list(line.substr(pos, close - pos + 1)));
    end = close + 1;
  } else {
    end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '#' && line[end] != '\r') ++end;
    v.text = std::string(line.substr(pos, end - pos));
  }
  std::string rest = trim(line.substr(end));
  if (!rest.empty() && rest.front() != '#') throw ParseError("unexpected text after value", line_no, end + 1);
  return v;
}

void validate_param(const ParamSpec& spec, const std::string& value, std::size_t line, std::size_t column) {
  auto bad = [&](const std::string& why) { return ValidationError("line " + std::to_string(line) + ": " + spec.key + " " + why); };
  switch (spec.type) {
    case ParamType::Integer: {
      if (value.empty() || !std::all_of(value.begin(), value.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("expected a non-negative integer for " + spec.key, line, column);
      auto [lo, hi] = integer_ranges().at(spec.key);
      if (value.size() > 9 || std::stoull(value) < lo || std::stoull(value) > hi)
        throw bad("must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      break;
    }
    case ParamType::Rational: {
      Rational q;
      try {
        q = parse_rational(value);
      } catch (const ParseError&) {
        throw ParseError("malformed rational for " + spec.key, line, column);
      }
      if (q <= 0) throw bad("must be positive");
      break;
    }
    case ParamType::RationalList: {
      auto items = split_list(value);
      if (items.empty()) throw bad("must not be empty");
      for (const auto& it : items) {
        Rational q;
        try {
          q = parse_rational(it);
        } catch (const ParseError&) {
          throw ParseError("malformed rational '" + it + "' in " + spec.key, line, column);
        }
        if (q <= 0) throw bad("entries must be positive");
      }
      break;
    }
    case ParamType::ContinuumRef:
      if (value.empty() || (value[0] != '@' && value[0] != '{')) throw ParseError("expected @name or a continuum literal", line, column);
      if (value[0] == '@' && !is_identifier(value.substr(1))) throw ParseError("bad continuum reference", line, column);
      break;
    case ParamType::Point:
      if (value.find(':') == std::string::npos) throw ParseError("expected <edge>:<t>", line, column);
      break;
  }
}

std::string value_text(const std::string& v) { return (is_number(v) || (!v.empty() && v.front() == '[')) ? v : quote(v); }

// ---- running -------------------------------------------------------------

std::string decimal(const Rational& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", to_double(q));
  return buf;
}

std::size_t int_param(const Analysis& a, const std::string& key, std::size_t fallback) {
  auto it = a.params.find(key);
  return it == a.params.end() ? fallback : std::stoul(it->second);
}

Rational rational_param(const Analysis& a, const std::string& key, const Rational& fallback) {
  auto it = a.params.find(key);
  return it == a.params.end() ? fallback : parse_rational(it->second);
}

std::vector<Rational> list_param(const Analysis& a, const std::string& key, std::vector<Rational> fallback) {
  auto it = a.params.find(key);
  if (it == a.params.end()) return fallback;
  std::vector<Rational> out;
  for (const auto& s : split_list(it->second)) out.push_back(parse_rational(s));
  return out;
}

Continuum resolve(const System& sys, const std::string& value) {
  if (!value.empty() && value[0] == '@') {
    auto it = sys.continua.find(value.substr(1));
    if (it == sys.continua.end()) throw ValidationError("unknown continuum '" + value + "'");
    return it->second;
  }
  return parse_continuum(*sys.graph, value);
}

PointOnGraph parse_point(const Graph& g, const std::string& text) {
  auto colon = text.find(':');
  auto e = g.find_edge(text.substr(0, colon));
  if (!e) throw ValidationError("unknown edge in point '" + text + "'");
  return g.canonical(PointOnGraph{*e, parse_rational(text.substr(colon + 1))});
}

Json literal_list(const Graph& g, const std::vector<Continuum>& v) {
  Json out = Json::array();
  for (const auto& k : v) out.push_back(to_literal(g, k));
  return out;
}

std::string point_literal(const Graph& g, const PointOnGraph& p) { return g.edge(p.edge).name + ":" + to_string(p.t); }

/// n, diameter and distance to the limit cycle for the states of an orbit.
Json series_json(const Graph& g, const std::vector<Continuum>& states, const std::vector<Continuum>& limit, std::size_t cycle_start) {
  Json n = Json::array(), diam = Json::array(), dist = Json::array();
  const std::size_t p = limit.size();
  for (std::size_t i = 0; i < states.size(); ++i) {
    n.push_back(i);
    diam.push_back(to_string(diameter(g, states[i])));
    if (p == 0) {
      dist.push_back(nullptr);
    } else {
      std::size_t phase = static_cast<std::size_t>(((static_cast<long long>(i) - static_cast<long long>(cycle_start)) % static_cast<long long>(p) +
                                                    static_cast<long long>(p)) %
                                                   static_cast<long long>(p));
      dist.push_back(to_string(hausdorff_distance(g, states[i], limit[phase])));
    }
  }
  return Json{{"n", n}, {"diameter", diam}, {"dist_to_limit", dist}};
}

std::vector<Continuum> states_of(const PLMap& f, const Continuum& a, std::size_t steps) {
  std::vector<Continuum> out{a};
  for (std::size_t i = 0; i < steps; ++i) out.push_back(induced_step(f, out.back()));
  return out;
}

Json classification_json(const Graph& g, const Classification& c) {
  return Json{{"verdict", verdict_name(c.verdict)},
              {"horizon", c.horizon},
              {"steps", c.steps},
              {"period", c.period},
              {"preperiod", c.preperiod},
              {"cycle_start", c.cycle_start},
              {"limit_cycle", literal_list(g, c.limit_cycle)},
              {"residual", to_string(c.residual)},
              {"final_diameter", to_string(c.final_diameter)},
              {"note", c.note}};
}

struct Context {
  const System& sys;
  const MarkovData* markov;
  std::uint64_t seed;
};

Json run_analysis(const Context& ctx, const Analysis& a) {
  const System& sys = ctx.sys;
  const Graph& g = *sys.graph;
  const PLMap& f = sys.map;
  Json out{{"kind", a.kind}, {"params", a.params}, {"status", "ok"}};
  Json checks = Json::array();
  std::map<std::string, std::size_t> tally{{"pass", 0}, {"fail", 0}, {"precondition-unmet", 0}};
  std::size_t kept_other = 0;
  auto add_check = [&](CheckOutcome o) {
    o.seed = ctx.seed;
    ++tally[status_name(o.status)];
    // Every failure is kept; other outcomes only up to a sample.
    if (o.status == CheckStatus::Fail || kept_other++ < kMaxListedChecks) checks.push_back(outcome_json(o));
  };
  auto periodic = [&] { return enumerate_periodic_subtrees(f, *ctx.markov, int_param(a, "period_cap", 64)); };

  if (a.kind == "classify") {
    ClassifyOptions o;
    o.horizon = int_param(a, "horizon", o.horizon);
    o.tol = rational_param(a, "tol", o.tol);
    o.period_cap = int_param(a, "period_cap", o.period_cap);
    Continuum k = resolve(sys, a.params.at("continuum"));
    Classification c = classify(f, k, o);
    out["result"] = classification_json(g, c);
    out["series"] = series_json(g, states_of(f, k, c.steps), c.limit_cycle, c.cycle_start);
  } else if (a.kind == "detect-period") {
    Continuum k = resolve(sys, a.params.at("continuum"));
    auto p = detect_exact_period(f, k, int_param(a, "horizon", 1000));
    out["result"] = p ? Json{{"found", true}, {"preperiod", p->preperiod}, {"period", p->period}} : Json{{"found", false}};
  } else if (a.kind == "orbit") {
    const std::size_t horizon = int_param(a, "horizon", 100);
    Continuum k = resolve(sys, a.params.at("continuum"));
    OrbitOptions oo;
    OrbitReport r = iterate_orbit(f, k, horizon, oo);
    Json pairs = Json::array();
    for (auto [j, l] : r.intersecting_pairs) pairs.push_back({j, l});
    out["result"] = Json{{"horizon", horizon},
                         {"final", to_literal(g, r.snapshots.back().second)},
                         {"intersecting_pairs", pairs},
                         {"pairs_recorded", r.pairs_recorded}};
    std::vector<Continuum> states;
    for (auto& [n, c] : r.snapshots) states.push_back(c);
    auto asym = detect_asymptotic_periodicity(f, k, horizon, rational_param(a, "tol", Rational(1, 1000000)));
    if (states.size() == horizon + 1 && asym)
      out["series"] = series_json(g, states, asym->limit_cycle, asym->cycle_start);
    else if (states.size() == horizon + 1)
      out["series"] = series_json(g, states, {}, 0);
  } else if (a.kind == "asymptotic") {
    Continuum k = resolve(sys, a.params.at("continuum"));
    auto r = detect_asymptotic_periodicity(f, k, int_param(a, "horizon", 2000), rational_param(a, "tol", Rational(1, 1000000)),
                                           int_param(a, "period_cap", 64));
    out["result"] = r ? Json{{"found", true},
                             {"period", r->period},
                             {"cycle_start", r->cycle_start},
                             {"limit_cycle", literal_list(g, r->limit_cycle)},
                             {"residual", to_string(r->residual)}}
                      : Json{{"found", false}};
  } else if (a.kind == "check-period-bound") {
    const std::size_t horizon = int_param(a, "horizon", 5000);
    if (a.params.count("continuum")) {
      add_check(check_period_bound(f, resolve(sys, a.params.at("continuum")), horizon));
    } else {
      const FixedPointSet fixed = fixed_points(f);
      for (const auto& p : periodic()) add_check(check_period_bound(f, p, fixed));
    }
  } else if (a.kind == "check-nesting") {
    const std::size_t horizon = int_param(a, "horizon", 5000);
    if (a.params.count("continuum") != a.params.count("continuum2"))
      throw ValidationError("check-nesting takes both continuum and continuum2 or neither");
    if (a.params.count("continuum")) {
      add_check(check_nesting(f, resolve(sys, a.params.at("continuum")), resolve(sys, a.params.at("continuum2")), horizon));
    } else {
      for (auto& o : check_nesting_all(f, periodic())) add_check(std::move(o));
    }
  } else if (a.kind == "check-recurrence") {
    add_check(check_recurrence_characterization(f, *ctx.markov, int_param(a, "horizon", 5000), rational_param(a, "tol", Rational(1, 10000))));
  } else if (a.kind == "check-center") {
    CenterOptions o;
    o.depth = static_cast<unsigned>(int_param(a, "depth", o.depth));
    o.horizon = int_param(a, "horizon", o.horizon);
    o.tol = rational_param(a, "tol", o.tol);
    o.period_cap = int_param(a, "period_cap", o.period_cap);
    CenterReport r = check_center_structure(f, *ctx.markov, o);
    Json chains = Json::array();
    for (const auto& c : r.chains) {
      Json levels = Json::array();
      for (const auto& l : c.levels) levels.push_back({{"continuum", to_literal(g, l.continuum)}, {"period", l.period}});
      chains.push_back({{"levels", levels}, {"residuals", literal_list(g, c.residuals)}});
    }
    Json residuals = Json::array();
    for (std::size_t i = 0; i < r.residual_classes.size(); ++i)
      residuals.push_back({{"continuum", to_literal(g, r.distinct_residuals[i])}, {"classification", classification_json(g, r.residual_classes[i])}});
    out["result"] = Json{{"chains", chains}, {"residuals", residuals}};
    add_check(r.outcome);
  } else if (a.kind == "verify-cycle") {
    add_check(verify_cycle_of_graphs(f, resolve(sys, a.params.at("continuum")), int_param(a, "period", 1)));
  } else if (a.kind == "enumerate-periodic") {
    Json list = Json::array();
    for (const auto& p : periodic()) list.push_back({{"continuum", to_literal(g, p.continuum)}, {"period", p.period}});
    out["result"] = Json{{"periodic", list}, {"cells", ctx.markov->cell_count()}};
  } else if (a.kind == "probe-equicontinuity") {
    ProbeOptions o;
    o.seed = ctx.seed;
    o.gammas = list_param(a, "gamma", o.gammas);
    o.perturbations = int_param(a, "samples", o.perturbations);
    auto eps = list_param(a, "eps", {});
    EquicontinuityReport r = probe_equicontinuity(f, resolve(sys, a.params.at("continuum")), eps, int_param(a, "horizon", 500), o);
    Json cands = Json::array();
    for (const auto& c : r.candidates) {
      Json certs = Json::array();
      for (const auto& e : c.certificates)
        certs.push_back({{"eps", to_string(e.eps)},
                         {"delta", e.delta ? Json(to_string(*e.delta)) : Json(nullptr)},
                         {"samples", e.samples},
                         {"worst", to_string(e.worst)}});
      cands.push_back({{"gamma", to_string(c.gamma)}, {"b", to_literal(g, c.b)}, {"certificates", certs}});
    }
    Json best = Json::array();
    for (const auto& b : r.best) best.push_back(b ? Json(*b) : Json(nullptr));
    out["result"] = Json{{"candidates", cands}, {"best", best}};
    add_check(r.outcome);
  } else if (a.kind == "omega-limit") {
    PointOnGraph x = parse_point(g, a.params.at("point"));
    auto pts = omega_limit_points(f, x, int_param(a, "burn_in", 1000), int_param(a, "samples", 1000), rational_param(a, "tol", Rational(1, 1000000)));
    Json list = Json::array();
    for (const auto& p : pts) list.push_back(point_literal(g, p));
    out["result"] = Json{{"points", list}, {"heuristic", true}};
  } else {
    throw ValidationError("unknown analysis kind '" + a.kind + "'");
  }

  if (!checks.empty() || a.kind.rfind("check-", 0) == 0 || a.kind == "verify-cycle" || a.kind == "probe-equicontinuity") {
    out["checks"] = checks;
    out["tally"] = tally;
    out["status"] = tally["fail"] ? "fail" : (tally["pass"] ? "pass" : (tally["precondition-unmet"] ? "precondition-unmet" : "pass"));
    if (sys.approximate && out["status"] == "pass") out["note"] = "approximate builtin";
  }
  return out;
}

bool needs_markov(const Analysis& a) {
  if (a.kind == "check-recurrence" || a.kind == "check-center" || a.kind == "enumerate-periodic") return true;
  return (a.kind == "check-period-bound" || a.kind == "check-nesting") && !a.params.count("continuum");
}

std::size_t count_failures(const Json& analyses) {
  std::size_t n = 0;
  for (const auto& a : analyses)
    if (a.contains("checks"))
      for (const auto& c : a["checks"]) n += c["status"] == "fail";
  return n;
}

}  // namespace

std::vector<std::string> analysis_kinds() {
  std::vector<std::string> out;
  for (const auto& [k, v] : kind_table()) out.push_back(k);
  return out;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  enum class Section { Top, Continua, Analysis } section = Section::Top;
  std::set<std::string> seen_top;
  std::set<std::string> seen_keys;
  std::vector<std::pair<std::size_t, std::map<std::string, std::pair<std::size_t, std::size_t>>>> positions;  // per analysis
  bool have_map = false;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t indent = line.find_first_not_of(" \t");
    if (t[0] == '[') {
      if (t.rfind("[[analysis]]", 0) == 0 && (t.size() == 12 || trim(t.substr(12))[0] == '#')) {
        section = Section::Analysis;
        s.analyses.emplace_back();
        positions.push_back({line_no, {}});
      } else if (t.rfind("[continua]", 0) == 0 && (t.size() == 10 || trim(t.substr(10))[0] == '#')) {
        if (section == Section::Continua || !s.continua.empty()) throw ParseError("duplicate [continua] section", line_no, indent + 1);
        section = Section::Continua;
      } else {
        throw ParseError("unknown section '" + t + "'", line_no, indent + 1);
      }
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no, indent + 1);
    std::string key = trim(line.substr(0, eq));
    if (!is_identifier(key)) throw ParseError("bad key '" + key + "'", line_no, indent + 1);
    std::size_t vcol = line.find_first_not_of(" \t", eq + 1);
    vcol = vcol == std::string_view::npos ? eq + 2 : vcol + 1;
    RawValue v = read_value(line, eq + 1, line_no);
    switch (section) {
      case Section::Top: {
        if (!seen_top.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no, indent + 1);
        if (key == "name") s.name = v.text;
        else if (key == "graph") s.graph = v.text;
        else if (key == "map") {
          s.map = v.text;
          have_map = true;
        } else if (key == "seed") {
          if (v.text.empty() || v.text.size() > 19 || !std::all_of(v.text.begin(), v.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ParseError("seed must be a non-negative integer", line_no, vcol);
          s.seed = std::stoull(v.text);
        } else if (key == "report") s.report = v.text;
        else if (key == "csv_dir") s.csv_dir = v.text;
        else throw ParseError("unknown key '" + key + "'", line_no, indent + 1);
        break;
      }
      case Section::Continua: {
        if (std::any_of(s.continua.begin(), s.continua.end(), [&](const auto& c) { return c.first == key; }))
          throw ParseError("duplicate continuum '" + key + "'", line_no, indent + 1);
        s.continua.emplace_back(key, v.text);
        break;
      }
      case Section::Analysis: {
        Analysis& a = s.analyses.back();
        if (key == "kind") {
          if (!a.kind.empty()) throw ParseError("duplicate kind", line_no, indent + 1);
          if (!kind_table().count(v.text)) throw ValidationError("line " + std::to_string(line_no) + ": unknown analysis kind '" + v.text + "'");
          a.kind = v.text;
        } else {
          if (a.params.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, indent + 1);
          a.params[key] = v.text;
          positions.back().second[key] = {line_no, vcol};
        }
        break;
      }
    }
  }
  if (!have_map) throw ParseError("scenario needs a map", 1, 1);
  for (std::size_t i = 0; i < s.analyses.size(); ++i) {
    Analysis& a = s.analyses[i];
    const std::size_t header = positions[i].first;
    if (a.kind.empty()) throw ParseError("analysis without kind", header, 1);
    const auto& specs = kind_table().at(a.kind);
    for (const auto& [key, value] : a.params) {
      auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& p) { return p.key == key; });
      auto [l, c] = positions[i].second.at(key);
      if (it == specs.end()) throw ValidationError("line " + std::to_string(l) + ": " + a.kind + " takes no parameter '" + key + "'");
      validate_param(*it, value, l, c);
    }
    for (const auto& p : specs)
      if (p.required && !a.params.count(p.key))
        throw ValidationError("line " + std::to_string(header) + ": " + a.kind + " needs '" + p.key + "'");
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "name = " << quote(s.name) << "\n";
  if (!s.graph.empty()) out << "graph = " << quote(s.graph) << "\n";
  out << "map = " << quote(s.map) << "\n";
  out << "seed = " << s.seed << "\n";
  if (!s.report.empty()) out << "report = " << quote(s.report) << "\n";
  if (!s.csv_dir.empty()) out << "csv_dir = " << quote(s.csv_dir) << "\n";
  if (!s.continua.empty()) {
    out << "\n[continua]\n";
    for (const auto& [k, v] : s.continua) out << k << " = " << quote(v) << "\n";
  }
  for (const auto& a : s.analyses) {
    out << "\n[[analysis]]\nkind = " << quote(a.kind) << "\n";
    for (const auto& [k, v] : a.params) out << k << " = " << value_text(v) << "\n";
  }
  return out.str();
}

System load_system(const Scenario& s, const std::filesystem::path& base_dir) {
  System sys{nullptr, PLMap{}, {}, {}, s.map, false};
  const std::string prefix = "builtin:";
  if (s.map.rfind(prefix, 0) == 0) {
    if (!s.graph.empty()) throw ValidationError("a builtin map brings its own graph; drop the graph key");
    Builtin b = make_builtin(s.map.substr(prefix.size()));
    sys.graph = b.graph;
    sys.map = std::move(b.map);
    sys.markov_seeds = std::move(b.markov_seeds);
    sys.continua = std::move(b.continua);
    sys.approximate = b.approximate;
  } else {
    if (s.graph.empty()) throw ValidationError("a map file needs a graph file");
    auto resolve_path = [&](const std::string& p) { return std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : base_dir / p; };
    sys.graph = std::make_shared<const Graph>(parse_graph(read_text_file(resolve_path(s.graph))));
    MapFile mf = parse_map(sys.graph, read_text_file(resolve_path(s.map)));
    sys.map = std::move(mf.map);
    sys.markov_seeds = std::move(mf.seeds);
  }
  for (const auto& [name, literal] : s.continua) sys.continua.insert_or_assign(name, parse_continuum(*sys.graph, literal));
  return sys;
}

Json outcome_json(const CheckOutcome& o) {
  Json j{{"theorem", o.theorem}, {"status", status_name(o.status)}, {"message", o.message}, {"seed", o.seed}};
  if (o.counterexample) {
    const Counterexample& c = *o.counterexample;
    j["counterexample"] = Json{{"graph", c.graph_text}, {"map", c.map_text}, {"continua", c.continua}, {"periods", c.periods}, {"parameters", c.parameters}};
  }
  return j;
}

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  const std::uint64_t seed = options.seed_override.value_or(s.seed);
  System sys = load_system(s, options.base_dir);
  std::optional<MarkovData> markov;
  if (std::any_of(s.analyses.begin(), s.analyses.end(), needs_markov)) {
    MarkovOptions mo;
    mo.extra_seeds = sys.markov_seeds;
    markov = build_markov(sys.map, mo);
  }
  Context ctx{sys, markov ? &*markov : nullptr, seed};

  std::vector<Json> results(s.analyses.size());
  std::vector<std::exception_ptr> errors(s.analyses.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < s.analyses.size();) {
      try {
        results[i] = run_analysis(ctx, s.analyses[i]);
        results[i]["index"] = i;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(s.analyses.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Json analyses = Json::array();
  for (auto& r : results) analyses.push_back(std::move(r));
  RunResult out;
  out.failures = count_failures(analyses);
  out.report = Json{{"scenario", s.name},
                    {"seed", seed},
                    {"system", sys.source},
                    {"approximate", sys.approximate},
                    {"graph", serialize_graph(*sys.graph)},
                    {"analyses", analyses},
                    {"failures", out.failures}};
  return out;
}

void write_outputs(const Scenario& s, const RunResult& r, const std::filesystem::path& base_dir) {
  auto resolve_path = [&](const std::string& p) { return std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : base_dir / p; };
  if (!s.report.empty()) write_file_atomic(resolve_path(s.report), r.report.dump(2) + "\n");
  if (!s.csv_dir.empty()) export_plot_data(r.report, resolve_path(s.csv_dir));
}

void export_plot_data(const Json& report, const std::filesystem::path& csv_dir) {
  if (!report.contains("analyses") || !report["analyses"].is_array()) throw IoError("report has no analyses array");
  std::ostringstream checks;
  checks << "analysis,kind,theorem,status,message\n";
  auto csv_field = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  auto exact_and_decimal = [](const Json& v) -> std::string {
    if (v.is_null()) return ",";
    const std::string s = v.get<std::string>();
    return s + "," + decimal(parse_rational(s));
  };
  for (const auto& a : report["analyses"]) {
    const std::size_t index = a.value("index", std::size_t{0});
    const std::string kind = a.value("kind", std::string{});
    if (a.contains("series")) {
      const Json& s = a["series"];
      std::ostringstream out;
      out << "n,diameter,diameter_decimal,dist_to_limit,dist_to_limit_decimal\n";
      for (std::size_t i = 0; i < s["n"].size(); ++i)
        out << s["n"][i].get<std::size_t>() << "," << exact_and_decimal(s["diameter"][i]) << "," << exact_and_decimal(s["dist_to_limit"][i]) << "\n";
      write_file_atomic(csv_dir / ("orbit_" + std::to_string(index) + "_" + kind + ".csv"), out.str());
    }
    if (a.contains("checks"))
      for (const auto& c : a["checks"])
        checks << index << "," << kind << "," << c["theorem"].get<std::string>() << "," << c["status"].get<std::string>() << ","
               << csv_field(c["message"].get<std::string>()) << "\n";
  }
  write_file_atomic(csv_dir / "checks.csv", checks.str());
}

RunResult run_random_suite(const std::string& suite, std::size_t count, std::uint64_t seed, std::size_t horizon) {
  if (suite != "period-bound" && suite != "nesting" && suite != "recurrence")
    throw ValidationError("unknown random suite '" + suite + "'");
  std::map<std::string, std::size_t> tally{{"pass", 0}, {"fail", 0}, {"precondition-unmet", 0}};
  Json failures = Json::array();
  std::size_t subtrees = 0;
  auto record = [&](CheckOutcome o, std::uint64_t map_seed) {
    o.seed = map_seed;
    ++tally[status_name(o.status)];
    if (o.status == CheckStatus::Fail && failures.size() < 20) failures.push_back(outcome_json(o));
  };
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t map_seed = seed * 1000003 + i;
    RandomMarkovMap r = random_markov_tree_map(map_seed);
    if (suite == "recurrence") {
      record(check_recurrence_characterization(r.map, r.markov, horizon), map_seed);
      continue;
    }
    auto all = enumerate_periodic_subtrees(r.map, r.markov);
    subtrees += all.size();
    if (suite == "period-bound") {
      const FixedPointSet fixed = fixed_points(r.map);
      for (const auto& p : all) record(check_period_bound(r.map, p, fixed), map_seed);
    } else {
      for (auto& o : check_nesting_all(r.map, all)) record(std::move(o), map_seed);
    }
  }
  RunResult out;
  out.failures = tally["fail"];
  out.report = Json{{"suite", suite}, {"maps", count}, {"seed", seed}, {"horizon", horizon}, {"periodic_subtrees", subtrees},
                    {"tally", tally}, {"failures", failures}};
  return out;
}

}  // namespace hyperdyn
