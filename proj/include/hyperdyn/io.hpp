#pragma once

#include "hyperdyn/metric_graph.hpp"
#include "hyperdyn/pl_map.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hyperdyn {

/// Lines `edge <id> <u> <v>`; `#` starts a comment. Throws ParseError, then the
/// graph validation errors.
Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& g);

struct MapFile {
  PLMap map;
  std::vector<PointOnGraph> seeds;  // `seed-point` lines, for Markov partitions
};

/// Lines `piece <edge> <lo> <hi> -> <edge>[<t0>..<t1>] ...` and
/// `seed-point <edge> <t>`.
MapFile parse_map(std::shared_ptr<const Graph> g, std::string_view text);
std::string serialize_map(const PLMap& f, const std::vector<PointOnGraph>& seeds = {});

std::string read_text_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace hyperdyn
