#include "hyperdyn/io.hpp"

#include "hyperdyn/errors.hpp"

#include <fstream>
#include <sstream>

namespace hyperdyn {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto tokens = tokenize(text.substr(pos, end - pos));
    if (!tokens.empty()) f(line_no, tokens);
    pos = end + 1;
  }
}

Rational rational_token(const Token& t, std::size_t line, std::string_view text) {
  try {
    return parse_rational(text);
  } catch (const ParseError&) {
    throw ParseError("malformed rational '" + std::string(text) + "'", line, t.column);
  }
}

EdgeId edge_token(const Graph& g, const std::string& name, std::size_t line, std::size_t column) {
  auto e = g.find_edge(name);
  if (!e) throw ParseError("unknown edge '" + name + "'", line, column);
  return *e;
}

/// `name[t0..t1]`
PathSegment segment_token(const Graph& g, const Token& t, std::size_t line) {
  const std::string& s = t.text;
  auto open = s.find('[');
  auto dots = s.find("..");
  if (open == std::string::npos || dots == std::string::npos || dots < open || s.back() != ']')
    throw ParseError("expected <edge>[<t0>..<t1>], got '" + s + "'", line, t.column);
  EdgeId e = edge_token(g, s.substr(0, open), line, t.column);
  Token lo{s.substr(open + 1, dots - open - 1), t.column + open + 1};
  Token hi{s.substr(dots + 2, s.size() - dots - 3), t.column + dots + 2};
  Rational a = rational_token(lo, line, lo.text);
  Rational b = rational_token(hi, line, hi.text);
  if (a < 0 || a > 1 || b < 0 || b > 1) throw ParseError("path coordinate outside [0,1]", line, t.column);
  return PathSegment{e, a, b};
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::vector<EdgeSpec> specs;
  for_each_line(text, [&](std::size_t line, const std::vector<Token>& tok) {
    if (tok[0].text != "edge") throw ParseError("unknown directive '" + tok[0].text + "'", line, tok[0].column);
    if (tok.size() != 4) throw ParseError("expected: edge <id> <u> <v>", line, tok[0].column);
    specs.push_back({tok[1].text, tok[2].text, tok[3].text});
  });
  if (specs.empty()) throw ParseError("graph file has no edges", 1, 1);
  return Graph::build(specs);
}

std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  for (const auto& e : g.edges()) out << "edge " << e.name << " " << g.vertex_name(e.u) << " " << g.vertex_name(e.v) << "\n";
  return out.str();
}

MapFile parse_map(std::shared_ptr<const Graph> g, std::string_view text) {
  std::vector<PieceSpec> pieces;
  std::vector<PointOnGraph> seeds;
  for_each_line(text, [&](std::size_t line, const std::vector<Token>& tok) {
    if (tok[0].text == "seed-point") {
      if (tok.size() != 3) throw ParseError("expected: seed-point <edge> <t>", line, tok[0].column);
      EdgeId e = edge_token(*g, tok[1].text, line, tok[1].column);
      Rational t = rational_token(tok[2], line, tok[2].text);
      if (t < 0 || t > 1) throw ParseError("seed coordinate outside [0,1]", line, tok[2].column);
      seeds.push_back({e, t});
      return;
    }
    if (tok[0].text != "piece") throw ParseError("unknown directive '" + tok[0].text + "'", line, tok[0].column);
    if (tok.size() < 6 || tok[4].text != "->")
      throw ParseError("expected: piece <edge> <lo> <hi> -> <edge>[<t0>..<t1>] ...", line, tok[0].column);
    PieceSpec p;
    p.edge = edge_token(*g, tok[1].text, line, tok[1].column);
    p.lo = rational_token(tok[2], line, tok[2].text);
    p.hi = rational_token(tok[3], line, tok[3].text);
    if (p.lo < 0 || p.hi > 1 || !(p.lo < p.hi)) throw ParseError("piece domain must satisfy 0 <= lo < hi <= 1", line, tok[2].column);
    for (std::size_t i = 5; i < tok.size(); ++i) p.path.push_back(segment_token(*g, tok[i], line));
    pieces.push_back(std::move(p));
  });
  return MapFile{PLMap::build(std::move(g), std::move(pieces)), std::move(seeds)};
}

std::string serialize_map(const PLMap& f, const std::vector<PointOnGraph>& seeds) {
  const Graph& g = f.graph();
  std::ostringstream out;
  for (const auto& p : f.piece_specs()) {
    out << "piece " << g.edge(p.edge).name << " " << to_string(p.lo) << " " << to_string(p.hi) << " ->";
    for (const auto& s : p.path) out << " " << g.edge(s.edge).name << "[" << to_string(s.from) << ".." << to_string(s.to) << "]";
    out << "\n";
  }
  for (const auto& s : seeds) out << "seed-point " << g.edge(s.edge).name << " " << to_string(s.t) << "\n";
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename onto '" + path.string() + "': " + ec.message());
}

}  // namespace hyperdyn
